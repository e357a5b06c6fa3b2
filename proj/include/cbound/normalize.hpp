#pragma once

#include "cbound/grammar.hpp"

namespace cbound {

/// Replaces every action a with |a| > 1 by a fresh nonterminal deriving
/// exactly sign(a)^|a| through doubling nonterminals (@P1 -> 1,
/// @Pm -> @P(m-1) @P(m-1), and @M* for negative actions).
Gvas expand_actions(const Gvas& g);

/// Weak Chomsky normal form: rules X -> Y Z, X -> a, X -> eps only.
/// Preserves L(G[start]) exactly. Precondition: actions in {-1, 0, 1}.
/// Throws Error("empty language") when the start symbol is not productive.
NormalizedGvas to_weak_cnf(const Gvas& g);

/// expand_actions, then to_weak_cnf (which prunes non-productive symbols).
NormalizedGvas normalize(const Gvas& g);

}  // namespace cbound
