#include "doctest.h"

#include <algorithm>

#include "cbound/decide.hpp"
#include "cbound/error.hpp"
#include "cbound/oracle.hpp"
#include "cbound/pvas.hpp"
#include "cbound/random_instances.hpp"
#include "helpers.hpp"

using namespace cbound;

namespace {

StateId state(const Pvas& p, const std::string& name) {
  const auto it = std::find(p.states.begin(), p.states.end(), name);
  REQUIRE(it != p.states.end());
  return static_cast<StateId>(it - p.states.begin());
}

StackSym symbol(const Pvas& p, const std::string& name) {
  const auto it = std::find(p.stack_alphabet.begin(), p.stack_alphabet.end(), name);
  REQUIRE(it != p.stack_alphabet.end());
  return static_cast<StackSym>(it - p.stack_alphabet.begin());
}

Pvas fixture(const std::string& name) { return parse_pvas(ref::read_fixture(name)); }

std::set<Counter> simulated(const Pvas& p, Counter max_counter, std::size_t max_stack) {
  const auto r = bfs_reach(p, max_counter, max_stack, 1000000);
  REQUIRE_FALSE(r.truncated());
  std::set<Counter> out;
  for (const auto& v : r.counter_values()) out.insert(v.at(0));
  return out;
}

}  // namespace

TEST_CASE("step on the program PVAS") {
  const auto p = fixture("doubling.pvas");
  const auto q3 = state(p, "q3"), q5 = state(p, "q5"), q7 = state(p, "q7"), q2 = state(p, "q2");
  const auto succ = step(p, Config{q3, {1}, {}});
  const std::set<Config> got(succ.begin(), succ.end());
  CHECK(got == std::set<Config>{Config{q5, {0}, {}}, Config{q7, {1}, {}}});

  const auto push = step(p, Config{q5, {0}, {}});
  CHECK(push == std::vector<Config>{Config{q2, {0}, {symbol(p, "A")}}});

  CHECK(step(p, Config{state(p, "q8"), {3}, {}}).empty());  // pop on empty stack
  CHECK(step(p, Config{q3, {0}, {}}) == std::vector<Config>{Config{q7, {0}, {}}});
}

TEST_CASE("stack top is the rightmost symbol") {
  const auto p = parse_pvas("pvas\ndim 1\ninit p 0 A,B\np -> q : add=0 pop=B\np -> r : add=0 pop=A\n");
  const auto succ = step(p, initial_config(p));
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].state == state(p, "q"));
  CHECK(succ[0].stack == std::vector<StackSym>{symbol(p, "A")});
}

TEST_CASE("bfs_reach budgets and flags") {
  const auto doubling = bfs_reach(fixture("doubling.pvas"), 64, 16, 1000000);
  CHECK_FALSE(doubling.truncated());
  Counter max = 0;
  for (const auto& v : doubling.counter_values()) max = std::max(max, v[0]);
  CHECK(max == 6);  // x = 2 doubles to 4, plus the final +2 at depth 0

  const auto loop = parse_pvas("pvas\ndim 1\ninit p 0 -\np -> p : add=1\n");
  for (Counter budget : {1, 5, 40}) CHECK(bfs_reach(loop, budget, 4, 1000).hit_max_counter);
  const auto pusher = parse_pvas("pvas\ndim 1\ninit p 0 -\np -> p : add=0 push=A\n");
  CHECK(bfs_reach(pusher, 4, 5, 1000).hit_max_stack);
  CHECK(bfs_reach(pusher, 4, 50, 10).hit_max_configs);
}

TEST_CASE("Ackermann PVAS computes A_1") {
  const auto p = fixture("ackermann_m1.pvas");
  const auto bot = state(p, "bot");
  const auto r = bfs_reach(p, 64, 16, 1000000);
  REQUIRE_FALSE(r.truncated());
  Counter best = -1;
  for (const auto& c : r.configs)
    if (c.state == bot && c.stack.empty()) best = std::max(best, c.counters[0]);
  CHECK(best == ref::ackermann(1, 1));
}

TEST_CASE("multi-dimensional simulation") {
  const auto p = parse_pvas("pvas\ndim 2\ninit p 1 0 -\np -> p : add=-1,1\n");
  CHECK(p.dimension() == 2);
  const auto values = bfs_reach(p, 8, 2, 100).counter_values();
  CHECK(values == std::set<std::vector<Counter>>{{1, 0}, {0, 1}});
  CHECK_THROWS_WITH_AS(reduce_to_gvas(p), "decision pipeline is 1-dimensional", Error);
}

TEST_CASE("reduction examples") {
  const auto loop = reduce_to_gvas(parse_pvas("pvas\ndim 1\ninit p 0 -\np -> p : add=1\n"));
  const auto ng = normalize(loop);
  for (const auto& w : ref::small_words(4)) {
    const bool ones = std::all_of(w.begin(), w.end(), [](std::int64_t a) { return a == 1; });
    CHECK(member(ng.grammar(), ng.start(), w) == ones);
  }
  CHECK(decide(loop).kind == Verdict::Kind::Unbounded);

  const auto pop_only = normalize(reduce_to_gvas(parse_pvas("pvas\ndim 1\ninit p 3 -\np -> p : add=1 pop=A\n")));
  for (const auto& w : ref::small_words(3)) CHECK(member(pop_only.grammar(), pop_only.start(), w) == w.empty());
  CHECK(reachability_set(pop_only.gvas(), 10).values == std::set<Counter>{3});
}

TEST_CASE("reduction agrees with the simulator on the fixtures") {
  for (const auto* name : {"doubling.pvas", "ackermann_m0.pvas", "ackermann_m1.pvas"}) {
    CAPTURE(name);
    const auto p = fixture(name);
    const auto orc = reachability_set(reduce_to_gvas(p), 64);
    REQUIRE(orc.closed);
    CHECK(orc.values == simulated(p, 64, 16));
  }
  const auto m1 = reachability_set(reduce_to_gvas(fixture("ackermann_m1.pvas")), 16);
  CHECK(m1.closed);
  CHECK(m1.max() == 3);
}

TEST_CASE("reduced grammars are prefix-closed") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = normalize(reduce_to_gvas(random_pvas(seed)));
    CHECK_FALSE(prefix_closure_violation(g, 5).has_value());
  }
}

TEST_CASE("PVAS text round trip and errors") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = random_pvas(seed);
    const auto text = print_pvas(p);
    CHECK(print_pvas(parse_pvas(text)) == text);
  }
  try {
    parse_pvas("pvas\ndim 1\ninit p 0 -\np -> q : add=x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_pvas("pvas\ninit p 0 -\n"), ParseError);
  CHECK_THROWS_AS(parse_pvas("pvas\ndim 1\ninit p 0 -\np -> q : add=1,2\n"), ParseError);
}

TEST_CASE("random PVAS generation is deterministic") {
  CHECK(print_pvas(random_pvas(0)) == print_pvas(random_pvas(0)));
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) distinct.insert(print_pvas(random_pvas(seed)));
  CHECK(distinct.size() == 100);
}
