#pragma once

#include <string>

#include "cbound/gvas_text.hpp"
#include "cbound/normalize.hpp"
#include "support/reference.hpp"

namespace testing {

inline cbound::Gvas gvas(const std::string& body, cbound::Counter c_init = 0, const std::string& start = "S") {
  return cbound::parse_gvas("gvas\ncounter_init " + std::to_string(c_init) + "\nstart " + start + "\n" + body);
}

inline cbound::Gvas fixture_gvas(const std::string& name) { return cbound::parse_gvas(ref::read_fixture(name)); }

inline cbound::NormalizedGvas normalized(const std::string& body, cbound::Counter c_init = 0,
                                         const std::string& start = "S") {
  return cbound::normalize(gvas(body, c_init, start));
}

}  // namespace testing
