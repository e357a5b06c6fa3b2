#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

struct DecideOptions {
  /// Largest cap of the escalating schedule 16, 64, 256, ...
  Counter max_cap = 256;
  /// Largest oracle budget of the schedule 32, 64, 128, ...
  Counter oracle_max = 256;
  /// After the schedules, search once more at the theoretical cap.
  bool complete = false;
  bool pruning = true;
  /// Sample words up to this length and check their prefixes.
  std::optional<std::size_t> check_prefix_closed;
};

struct Verdict {
  enum class Kind { Unbounded, BoundedClosure, BoundedCapExhausted, Inconclusive };

  Kind kind = Kind::Inconclusive;
  NormalizedGvas normalized;
  std::optional<Certificate> certificate;  // Unbounded
  Counter certificate_cap = 0;             // Unbounded, BoundedCapExhausted
  std::set<Counter> reach_set;             // BoundedClosure
  std::vector<Counter> caps_tried;
  std::vector<Counter> budgets_tried;
  std::vector<std::string> warnings;
};

std::string to_string(Verdict::Kind k);

/// Precondition: L(g) is prefix-closed (guaranteed for reduced PVAS).
Verdict decide(const Gvas& g, const DecideOptions& opts = {});

/// A word of length <= max_len in L(G) with a prefix outside L(G), if any.
std::optional<Word> prefix_closure_violation(const NormalizedGvas& g, std::size_t max_len);

/// Geometric schedules used by decide().
std::vector<Counter> cap_schedule(Counter c_init, Counter max_cap);
std::vector<Counter> budget_schedule(Counter c_init, Counter max_budget);

}  // namespace cbound
