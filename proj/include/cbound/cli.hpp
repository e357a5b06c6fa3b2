#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbound::cli {

/// Exit statuses of the command-line tool.
enum Status : int { kOk = 0, kViolation = 1, kInconclusive = 2, kInputError = 3 };

/// Runs one invocation. `args` excludes the program name; "-" as an input
/// path reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cbound::cli
