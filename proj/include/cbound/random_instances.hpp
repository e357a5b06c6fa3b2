#pragma once

#include <cstdint>

#include "cbound/grammar.hpp"
#include "cbound/pvas.hpp"

namespace cbound {

struct RandomGvasParams {
  std::size_t max_nonterminals = 3;
  std::int64_t max_abs_action = 4;
  std::size_t max_rhs = 3;
  std::size_t max_rules_per_symbol = 3;
  Counter max_c_init = 3;
};

/// Arbitrary rules (n-ary, actions in [-max_abs_action, max_abs_action]);
/// regenerated until the start symbol is productive, then pruned.
Gvas random_gvas(std::uint64_t seed, const RandomGvasParams& p = {});

/// Weak-CNF grammar with every nonterminal productive.
NormalizedGvas random_normalized(std::uint64_t seed, std::size_t max_nonterminals = 3, Counter max_c_init = 3);

struct RandomPvasParams {
  std::size_t max_states = 3;
  std::size_t max_stack_symbols = 2;
  std::size_t max_transitions = 6;
  std::int64_t max_abs_delta = 1;
  std::size_t max_initial_stack = 1;
  Counter max_c_init = 2;
};

/// One-dimensional PVAS.
Pvas random_pvas(std::uint64_t seed, const RandomPvasParams& p = {});

}  // namespace cbound
