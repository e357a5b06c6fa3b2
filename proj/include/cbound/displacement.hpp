#pragma once

#include <optional>
#include <vector>

#include "cbound/ext_value.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// delta(X) = sup of sum_of(w) over w in L(G[X]), per nonterminal.
struct DisplacementTable {
  std::vector<ExtValue> value;

  const ExtValue& operator[](NtId x) const { return value.at(x); }
  std::size_t size() const { return value.size(); }
};

DisplacementTable displacement_table(const NormalizedGvas& g);

/// Complete tree for X without a repeated nonterminal on any branch whose
/// yield sums to delta(X). Throws Error when delta(X) is +inf.
ParseTree elementary_tree(const NormalizedGvas& g, NtId x);

/// Some complete elementary tree for X (the first one the fixpoint finds).
/// Defined for every productive X, also when delta(X) is +inf.
ParseTree earliest_tree(const NormalizedGvas& g, NtId x);

struct PumpWitness {
  NtId anchor = 0;
  /// Rooted at anchor, exactly one open leaf labelled anchor.
  ParseTree pump_tree;
  /// Rooted at the start symbol, exactly one open leaf labelled anchor.
  ParseTree context_tree;
  /// sum of the actions of pump_tree.
  std::int64_t gain = 0;
};

/// Present iff delta(start) is +inf.
std::optional<PumpWitness> find_positive_pump(const NormalizedGvas& g);

/// Tree from the start symbol whose only open leaf is labelled X.
/// Throws Error when X is not derivable.
ParseTree derivability_witness(const NormalizedGvas& g, NtId x);

/// Complete trees T_j for G[S_j] whose yields sum to > 0 when the
/// displacements sum to > 0 and to exactly 0 when they sum to 0.
std::vector<ParseTree> derive_witness(const NormalizedGvas& g, const std::vector<NtId>& starts);

/// Replaces the leftmost open leaf of `host` by `plug`. Throws Error when
/// the labels differ or there is no open leaf.
ParseTree splice(const ParseTree& host, const ParseTree& plug);

/// No nonterminal repeats along a root-to-leaf path.
bool is_elementary(const ParseTree& t);

}  // namespace cbound
