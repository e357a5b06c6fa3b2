#pragma once

#include <optional>

#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// c_init + 4^(4(|V|+1)) for the normalized grammar. Throws Error when the
/// value does not fit in 63 bits.
Counter theoretical_cap(const NormalizedGvas& g);
Counter theoretical_cap(std::size_t num_nonterminals, Counter c_init);

struct SearchOptions {
  Counter cap = 16;
  /// Restrict to certificates whose branch lengths and values respect the
  /// small-certificate bounds.
  bool pruning = true;
};

/// A certificate whose annotations are all <= cap, if one exists.
std::optional<Certificate> find_certificate(const NormalizedGvas& g, const SearchOptions& opts);

}  // namespace cbound
