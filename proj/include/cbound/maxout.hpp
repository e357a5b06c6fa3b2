#pragma once

#include <optional>
#include <vector>

#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// MO(X, c): largest output of a flow tree rooted at X with input c and every
/// annotation at most `cap`. Entries are -inf when no finite output exists.
class MaxOutTable {
 public:
  MaxOutTable(const NormalizedGvas& g, Counter cap);

  Counter cap() const { return cap_; }
  const Grammar& grammar() const { return g_; }

  ExtNat operator()(NtId x, ExtNat c) const;
  /// MO for any rhs symbol: actions and epsilon use the leaf conditions.
  ExtNat apply(const Symbol& s, ExtNat c) const;
  /// min{b : MO(z, b) >= need}, absent when no b <= cap qualifies.
  std::optional<Counter> min_input(NtId z, Counter need) const;

  /// Valid flow tree rooted at x with in = c and out = d. Precondition:
  /// d <= MO(x, c).
  FlowNode materialize(NtId x, Counter c, ExtNat d) const;
  /// Smallest complete tree for x; root input `in`, every other annotation -inf.
  FlowNode bottom_tree(NtId x, ExtNat in) const;

 private:
  struct Hist {
    Counter value;
    std::uint64_t stamp;
    RuleId rule;
    Counter mid;
  };

  Counter current(NtId x, Counter c) const;
  std::size_t key(NtId x, Counter c) const { return static_cast<std::size_t>(x) * (cap_ + 1) + c; }
  FlowNode bottom_below(const Symbol& s) const;

  const Grammar& g_;
  Counter cap_;
  std::vector<std::vector<Hist>> hist_;
  std::vector<RuleId> smallest_rule_;
};

}  // namespace cbound
