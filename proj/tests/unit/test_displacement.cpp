#include "doctest.h"

#include <cmath>
#include <random>

#include "cbound/displacement.hpp"
#include "cbound/error.hpp"
#include "cbound/random_instances.hpp"
#include "helpers.hpp"

using namespace cbound;
using testing::normalized;

namespace {

NormalizedGvas ackermann2() { return normalize(testing::fixture_gvas("ackermann_m2.gvas")); }

std::int64_t partial_sum(const ParseTree& t) {
  std::int64_t s = 0;
  for (const auto& sym : sentential_yield(t))
    if (sym.is_action()) s += sym.value;
  return s;
}

std::size_t open_count(const ParseTree& t) {
  const auto y = sentential_yield(t);
  return static_cast<std::size_t>(std::count_if(y.begin(), y.end(), [](const Symbol& s) { return s.is_nonterminal(); }));
}

double pow4(std::size_t e) { return std::pow(4.0, static_cast<double>(e)); }

}  // namespace

TEST_CASE("displacement table examples") {
  const auto g = ackermann2();
  const auto t = displacement_table(g);
  CHECK(t[g.grammar().at("X0")] == ExtValue(1));
  CHECK(t[g.grammar().at("X1")] == ExtValue(2));
  CHECK(t[g.grammar().at("X2")].is_top());

  const auto m = normalized("S -> M\nM -> -1\n");
  CHECK(displacement_table(m)[m.start()] == ExtValue(-1));
}

TEST_CASE("finite displacements match height-bounded enumeration") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = random_normalized(seed, 4, 0);
    const auto t = displacement_table(g);
    const auto nv = g.num_nonterminals();
    const auto best = ref::best_sum_up_to_height(g.grammar(), nv + 1);
    const auto deeper = ref::best_sum_up_to_height(g.grammar(), 3 * nv + 3);
    for (NtId x = 0; x < nv; ++x) {
      CAPTURE(seed);
      CAPTURE(x);
      REQUIRE(best[x].has_value());
      if (t[x].is_finite()) {
        CHECK(*best[x] == t[x].value());
        CHECK(*deeper[x] == t[x].value());
        CHECK(std::abs(t[x].value()) <= (std::int64_t{1} << (nv + 1)));
      } else {
        CHECK(t[x].is_top());
        CHECK(*deeper[x] > *best[x]);  // keeps growing
      }
    }
  }
}

TEST_CASE("displacement is monotone under rule addition") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = random_normalized(seed, 3, 0);
    const auto t = displacement_table(g);
    std::mt19937_64 rng(seed);
    Gvas bigger = g.gvas();
    const auto nv = static_cast<NtId>(g.num_nonterminals());
    bigger.grammar.add_rule(static_cast<NtId>(rng() % nv),
                            {Symbol::nonterminal(static_cast<NtId>(rng() % nv)), Symbol::nonterminal(static_cast<NtId>(rng() % nv))});
    const auto t2 = displacement_table(NormalizedGvas::check(bigger));
    for (NtId x = 0; x < nv; ++x) CHECK(t[x] <= t2[x]);
  }
}

TEST_CASE("elementary trees") {
  const auto g = ackermann2();
  const auto& gr = g.grammar();
  const auto x0 = elementary_tree(g, gr.at("X0"));
  CHECK(x0.size() == 2);
  CHECK(yield_of(x0) == Word{1});
  const auto x1 = elementary_tree(g, gr.at("X1"));
  CHECK(yield_of(x1) == Word{1, 1});
  CHECK(is_elementary(x1));
  CHECK_THROWS_WITH_AS(elementary_tree(g, gr.at("X2")), doctest::Contains("find_positive_pump"), Error);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = random_normalized(seed, 4, 0);
    const auto t = displacement_table(r);
    for (NtId x = 0; x < r.num_nonterminals(); ++x) {
      const auto e0 = earliest_tree(r, x);
      CHECK(is_elementary(e0));
      CHECK(check_parse_tree(r.grammar(), e0).empty());
      if (!t[x].is_finite()) continue;
      const auto e = elementary_tree(r, x);
      CHECK(is_elementary(e));
      CHECK(check_parse_tree(r.grammar(), e).empty());
      CHECK(e.label == Symbol::nonterminal(x));
      CHECK(sum_of(yield_of(e)) == t[x].value());
      CHECK(static_cast<double>(e.size()) <= std::pow(2.0, static_cast<double>(r.num_nonterminals() + 1)));
    }
  }
}

TEST_CASE("positive pump examples") {
  const auto g1 = normalized("S -> 1 S\nS ->\n");
  const auto p = find_positive_pump(g1);
  REQUIRE(p.has_value());
  CHECK(p->anchor == g1.start());
  CHECK(p->gain == 1);
  CHECK(partial_sum(p->pump_tree) == 1);
  CHECK(sentential_yield(p->pump_tree) == std::vector<Symbol>{Symbol::action(1), Symbol::nonterminal(g1.start())});

  const auto ack = ackermann2();
  const auto q = find_positive_pump(ack);
  REQUIRE(q.has_value());
  CHECK(q->anchor == ack.grammar().at("X2"));
  const auto y = sentential_yield(q->pump_tree);
  CHECK(y.front() == Symbol::action(-1));
  CHECK(partial_sum(q->pump_tree) == 1);

  CHECK_FALSE(find_positive_pump(normalized("S -> M\nM -> -1\n")).has_value());
}

TEST_CASE("pump witnesses on random grammars") {
  std::size_t found = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = random_normalized(seed, 4, 0);
    const auto t = displacement_table(g);
    const auto p = find_positive_pump(g);
    CHECK(p.has_value() == t[g.start()].is_top());
    if (!p) continue;
    ++found;
    const auto nv = g.num_nonterminals();
    CHECK(derivable_set(g.grammar())[p->anchor]);
    CHECK(check_parse_tree(g.grammar(), p->pump_tree).empty());
    CHECK(check_parse_tree(g.grammar(), p->context_tree).empty());
    CHECK(p->pump_tree.label == Symbol::nonterminal(p->anchor));
    CHECK(p->context_tree.label == Symbol::nonterminal(g.start()));
    CHECK(open_count(p->pump_tree) == 1);
    CHECK(open_count(p->context_tree) == 1);
    CHECK(p->gain > 0);
    CHECK(partial_sum(p->pump_tree) == p->gain);
    CHECK(static_cast<double>(p->pump_tree.size()) <= pow4(nv + 1));
    CHECK(static_cast<double>(p->context_tree.size()) <= pow4(nv + 1));
  }
  CHECK(found > 20);
}

TEST_CASE("derivability witness") {
  const auto ack = ackermann2();
  const auto& gr = ack.grammar();
  CHECK(derivability_witness(ack, ack.start()) == ParseTree::leaf(Symbol::nonterminal(ack.start())));
  const auto w = derivability_witness(ack, gr.at("X0"));
  CHECK(check_parse_tree(gr, w).empty());
  const auto y = sentential_yield(w);
  CHECK(y == std::vector<Symbol>{Symbol::action(1), Symbol::action(1), Symbol::nonterminal(gr.at("X0"))});

  const auto g = normalized("S -> 1\nA -> 0\n");
  CHECK_THROWS_AS(derivability_witness(g, g.grammar().at("A")), Error);
}

TEST_CASE("derive_witness examples") {
  const auto g = normalized("A -> 1\nB -> -1\n", 0, "A");
  const auto& gr = g.grammar();
  const auto trees = derive_witness(g, {gr.at("A"), gr.at("B")});
  REQUIRE(trees.size() == 2);
  CHECK(trees[0].size() == 2);
  CHECK(trees[1].size() == 2);
  CHECK(sum_of(yield_of(trees[0])) + sum_of(yield_of(trees[1])) == 0);

  const auto ack = ackermann2();
  const auto x1 = derive_witness(ack, {ack.grammar().at("X1")});
  CHECK(sum_of(yield_of(x1[0])) == 2);
  CHECK(static_cast<double>(x1[0].size()) <= 3 * pow4(ack.num_nonterminals() + 1));

  const auto mix = normalized("S -> 1 S\nS ->\nM -> -1\n");
  const auto& mg = mix.grammar();
  const auto t = derive_witness(mix, {mg.at("S"), mg.at("M")});
  CHECK(sum_of(yield_of(t[0])) + sum_of(yield_of(t[1])) > 0);
  CHECK(sum_of(yield_of(t[0])) == 2);  // two pump copies suffice
}

TEST_CASE("splice") {
  const auto g1 = normalized("S -> 1 S\nS ->\n");
  const auto p = find_positive_pump(g1);
  REQUIRE(p.has_value());
  const auto twice = splice(p->pump_tree, p->pump_tree);
  CHECK(partial_sum(twice) == 2);
  CHECK(open_count(twice) == 1);
  CHECK_THROWS_AS(splice(elementary_tree(g1, g1.start()), p->pump_tree), Error);
}
