#include "doctest.h"

#include "cbound/error.hpp"
#include "cbound/oracle.hpp"
#include "cbound/random_instances.hpp"
#include "helpers.hpp"

using namespace cbound;
using testing::gvas;

namespace {

std::vector<Symbol> rhs_of(const Grammar& g, NtId x) {
  REQUIRE(g.rules_of(x).size() == 1);
  return g.rule(g.rules_of(x)[0]).rhs;
}

}  // namespace

TEST_CASE("expand_actions uses binary doubling chains") {
  const auto e = expand_actions(gvas("S -> 5\n"));
  const auto& g = e.grammar;
  const auto s = rhs_of(g, g.at("S"));
  REQUIRE(s.size() == 1);
  const auto wrapper = rhs_of(g, s[0].nt());
  REQUIRE(wrapper.size() == 2);  // 5 = 101b
  const NtId b3 = wrapper[0].nt(), b1 = wrapper[1].nt();
  CHECK(rhs_of(g, b1) == std::vector<Symbol>{Symbol::action(1)});
  const auto b3r = rhs_of(g, b3);
  REQUIRE(b3r.size() == 2);
  CHECK(b3r[0] == b3r[1]);
  const auto b2r = rhs_of(g, b3r[0].nt());
  CHECK(b2r == std::vector<Symbol>{Symbol::nonterminal(b1), Symbol::nonterminal(b1)});
  for (NtId x = 1; x < g.num_nonterminals(); ++x) CHECK(g.name(x).rfind(kFreshPrefix, 0) == 0);

  const auto lang = ref::words_up_to(g, 8);
  CHECK(lang[g.at("S")] == std::set<Word>{{1, 1, 1, 1, 1}});
  const auto neg = expand_actions(gvas("S -> -6 2\n"));
  CHECK(ref::words_up_to(neg.grammar, 10)[0] == std::set<Word>{{-1, -1, -1, -1, -1, -1, 1, 1}});
}

TEST_CASE("expand_actions leaves small actions alone") {
  const auto g = gvas("S -> -1 S\nS ->\n");
  CHECK(expand_actions(g).grammar.same_as(g.grammar));
}

TEST_CASE("expansion preserves the reachability set") {
  const auto g = gvas("S -> 5\n");
  const auto before = general_reachability_set(g, 20);
  const auto after = general_reachability_set(expand_actions(g), 20);
  CHECK(before.values == std::set<Counter>{5});
  CHECK(after.values == std::set<Counter>{5});
  CHECK(reachability_set(g, 20).values == std::set<Counter>{5});
}

TEST_CASE("weak CNF examples") {
  const auto g1 = to_weak_cnf(gvas("S -> 1 S\nS ->\n"));
  const auto& gr = g1.grammar();
  CHECK(gr.num_nonterminals() == 2);
  CHECK(gr.rules().size() == 3);
  std::string why;
  CHECK(has_normalized_shape(gr, &why));

  const auto ack = to_weak_cnf(testing::fixture_gvas("ackermann_m1.gvas"));
  const auto& a = ack.grammar();
  // X1 -> N P, P -> X1 X0, X1 -> U X0, N -> -1, U -> 1, X0 -> 1
  CHECK(a.num_nonterminals() == 5);
  CHECK(a.rules().size() == 6);
  const NtId x1 = a.at("X1"), x0 = a.at("X0");
  int binary = 0;
  for (RuleId r : a.rules_of(x1)) {
    const auto& rhs = a.rule(r).rhs;
    REQUIRE(rhs.size() == 2);
    ++binary;
    if (rhs[1] == Symbol::nonterminal(x0)) CHECK(rhs_of(a, rhs[0].nt()) == std::vector<Symbol>{Symbol::action(1)});
    else CHECK(rhs_of(a, rhs[1].nt()) == std::vector<Symbol>{Symbol::nonterminal(x1), Symbol::nonterminal(x0)});
  }
  CHECK(binary == 2);
}

TEST_CASE("unit rules are inlined") {
  const auto g = to_weak_cnf(gvas("S -> A\nA -> B\nB -> 1\nB -> A A\n"));
  for (const auto& r : g.grammar().rules())
    CHECK_FALSE((r.rhs.size() == 1 && r.rhs[0].is_nonterminal()));
  const auto lang = ref::words_up_to(g.grammar(), 3);
  CHECK(lang[g.start()] == std::set<Word>{{1}, {1, 1}, {1, 1, 1}});
}

TEST_CASE("normalization is the identity on normalized input") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ng = random_normalized(seed, 4, 2);
    const auto again = normalize(ng.gvas());
    CHECK(again.grammar().same_as(ng.grammar()));
    CHECK(again.c_init() == ng.c_init());
  }
}

TEST_CASE("normalization preserves short words") {
  const auto words = ref::small_words(5);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomGvasParams p;
    p.max_abs_action = 1;
    p.max_nonterminals = 3;
    const auto g = random_gvas(seed, p);
    const auto ng = normalize(g);
    const auto lang = ref::words_up_to(g.grammar, 5)[g.grammar.start()];
    for (const auto& w : words) CHECK(member(ng.grammar(), ng.start(), w) == (lang.count(w) > 0));
  }
}

TEST_CASE("normalization rejects an empty language") {
  CHECK_THROWS_WITH_AS(normalize(gvas("S -> S 1\n")), "empty language", Error);
}

TEST_CASE("normalized check rejects bad shapes") {
  CHECK_THROWS_AS(NormalizedGvas::check(gvas("S -> 1 1\n")), Error);
  CHECK_THROWS_AS(NormalizedGvas::check(gvas("S -> 2\n")), Error);
  CHECK_THROWS_AS(NormalizedGvas::check(gvas("S -> S S\n")), Error);
  CHECK_NOTHROW(NormalizedGvas::check(gvas("S -> S S\nS ->\n")));
}
