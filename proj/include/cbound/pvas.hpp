#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cbound/grammar.hpp"

namespace cbound {

using StateId = std::uint32_t;
using StackSym = std::uint32_t;

struct StackOp {
  enum class Kind : std::uint8_t { Nop, Push, Pop };
  Kind kind = Kind::Nop;
  StackSym symbol = 0;  // meaningless for Nop

  static StackOp nop() { return {}; }
  static StackOp push(StackSym g) { return {Kind::Push, g}; }
  static StackOp pop(StackSym g) { return {Kind::Pop, g}; }

  friend bool operator==(const StackOp&, const StackOp&) = default;
};

struct Transition {
  StateId source = 0;
  std::vector<std::int64_t> delta;
  StackOp op;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// k-dimensional pushdown VAS. The stack top is the rightmost symbol.
struct Pvas {
  std::vector<std::string> states;
  std::vector<std::string> stack_alphabet;
  StateId q_init = 0;
  std::vector<Counter> c_init;
  std::vector<StackSym> w_init;  // bottom first
  std::vector<Transition> transitions;

  std::size_t dimension() const { return c_init.size(); }
  /// Throws Error on dangling ids or mismatched delta lengths.
  void validate() const;
};

struct Config {
  StateId state = 0;
  std::vector<Counter> counters;
  std::vector<StackSym> stack;  // rightmost symbol is the top

  friend auto operator<=>(const Config&, const Config&) = default;
};

Config initial_config(const Pvas& p);

/// All successors of `c`; blocked transitions contribute nothing.
std::vector<Config> step(const Pvas& p, const Config& c);

struct BfsResult {
  std::set<Config> configs;
  bool hit_max_counter = false;
  bool hit_max_stack = false;
  bool hit_max_configs = false;

  bool truncated() const { return hit_max_counter || hit_max_stack || hit_max_configs; }
  /// Distinct counter vectors among the reached configurations.
  std::set<std::vector<Counter>> counter_values() const;
};

/// Breadth-first closure of step() from the initial configuration. Successors
/// exceeding a budget are discarded and the matching flag is raised.
BfsResult bfs_reach(const Pvas& p, Counter max_counter, std::size_t max_stack, std::size_t max_configs);

/// Grammar whose language is the set of counter-delta sequences along all
/// run prefixes (prefix-closed by construction). Requires dimension 1.
Gvas reduce_to_gvas(const Pvas& p);

/// Line-oriented PVAS format:
///
///     pvas
///     dim 1
///     init q0 2 A,B        # state, counters, stack bottom-to-top or '-'
///     q0 -> q1 : add=-1 push=A
///     q1 -> q0 : add=1 pop=A
///     q1 -> q1 : add=0
Pvas parse_pvas(std::string_view text);
std::string print_pvas(const Pvas& p);

}  // namespace cbound
