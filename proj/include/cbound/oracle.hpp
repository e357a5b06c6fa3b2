#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// Exact reachability relation c =>^X d restricted to values in [0, N],
/// computed on demand from a seed pair.
class ReachTable {
 public:
  ReachTable(const NormalizedGvas& g, Counter budget, NtId seed, Counter seed_input);
  ~ReachTable();
  ReachTable(ReachTable&&) noexcept;
  ReachTable& operator=(ReachTable&&) noexcept;

  Counter budget() const;
  /// True when some step wanted a value above the budget.
  bool capped() const;
  /// Whether (x, c) was explored. Entries of unexplored pairs are empty.
  bool explored(NtId x, Counter c) const;
  std::set<Counter> entry(NtId x, Counter c) const;
  bool contains(NtId x, Counter c, Counter d) const;
  std::size_t explored_pairs() const;

  /// Complete parse tree of G[x] whose yield moves c to d without leaving
  /// [0, N], rebuilt from backpointers. Absent when d is not in entry(x, c).
  std::optional<ParseTree> witness(NtId x, Counter c, Counter d) const;
  /// Same derivation as a flow tree whose annotations are the exact counter
  /// values along the run.
  std::optional<FlowTree> witness_flow(NtId x, Counter c, Counter d) const;

  /// Re-applies every rule to every explored pair; true when nothing new
  /// would be added (and nothing new would be needed).
  bool is_fixpoint() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ReachTable reach_table(const NormalizedGvas& g, Counter budget);

struct OracleResult {
  bool closed = false;
  std::set<Counter> values;  // exact when closed, a lower bound otherwise
  std::optional<Counter> max() const {
    if (values.empty()) return std::nullopt;
    return *values.rbegin();
  }
};

/// Normalizes internally.
OracleResult reachability_set(const Gvas& g, Counter budget);

/// Reference implementation working directly on n-ary rules with arbitrary
/// integer actions (no normalization involved).
OracleResult general_reachability_set(const Gvas& g, Counter budget);

struct MaxReach {
  std::optional<Counter> max;  // absent: no output at all
  bool capped = false;
};

MaxReach max_reachable(const NormalizedGvas& g, NtId x, Counter c, Counter budget);

/// Flow tree rooted at x with in = c and out = d, all values exact. Throws
/// Error when c =>^x d does not hold within the budget.
FlowTree build_flow_tree(const NormalizedGvas& g, NtId x, Counter c, Counter d, Counter budget = 1024);

}  // namespace cbound
