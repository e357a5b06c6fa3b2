#include "doctest.h"

#include "cbound/brute_force.hpp"
#include "cbound/certsearch.hpp"
#include "cbound/decide.hpp"
#include "cbound/error.hpp"
#include "cbound/maxout.hpp"
#include "cbound/oracle.hpp"
#include "cbound/random_instances.hpp"
#include "helpers.hpp"

using namespace cbound;
using testing::normalized;

TEST_CASE("MO examples") {
  const auto g1 = normalized("S -> 1 S\nS ->\n");
  const MaxOutTable mo(g1, 3);
  CHECK(mo(g1.start(), 0) == ExtNat(3));
  CHECK(mo(g1.start(), ExtNat::bottom()) == ExtNat::bottom());

  const auto m = normalized("S -> -1\n");
  CHECK(MaxOutTable(m, 8)(m.start(), 0) == ExtNat::bottom());
  CHECK(MaxOutTable(m, 8)(m.start(), 2) == ExtNat(1));

  const auto ack = normalize(testing::fixture_gvas("ackermann_m1.gvas"));
  CHECK(MaxOutTable(ack, 32)(ack.grammar().at("X1"), 5) == ExtNat(7));
}

TEST_CASE("MO dominates the exact reachability maximum") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = random_normalized(seed, 3, 3);
    const Counter cap = 12;
    const MaxOutTable mo(g, cap);
    for (NtId x = 0; x < g.num_nonterminals(); ++x) {
      for (Counter c = 0; c <= cap; ++c) {
        const auto r = max_reachable(g, x, c, cap);
        if (r.max) CHECK(ExtNat(*r.max) <= mo(x, c));
        const auto v = mo(x, c);
        if (c > 0) CHECK(mo(x, c - 1) <= v);
        if (!v.is_finite()) continue;
        const auto t = mo.materialize(x, c, v);
        CHECK(check_flow_conditions(g.grammar(), t).empty());
        CHECK(t.in == ExtNat(c));
        CHECK(t.out == v);
      }
    }
  }
}

TEST_CASE("theoretical cap") {
  CHECK(theoretical_cap(2, 0) == 16777216);
  CHECK(theoretical_cap(1, 3) == 65539);
  CHECK_THROWS_AS(theoretical_cap(40, 0), Error);
}

TEST_CASE("certificate search examples") {
  const auto g1 = normalized("S -> 1 S\nS ->\n");
  const auto c = find_certificate(g1, {4, true});
  REQUIRE(c.has_value());
  CHECK(validate_certificate(g1.gvas(), *c).empty());

  const auto down = normalized("S -> M S\nS ->\nM -> -1\n", 2);
  CHECK_FALSE(find_certificate(down, {16, true}).has_value());
  CHECK_FALSE(find_certificate(down, {16, false}).has_value());

  const auto ack = normalize(testing::fixture_gvas("ackermann_m1.gvas")).with_c_init(0);
  CHECK_FALSE(find_certificate(ack, {16, true}).has_value());
  CHECK_FALSE(find_certificate(ack, {16, false}).has_value());
}

TEST_CASE("brute force examples and guard") {
  const auto g1 = normalized("S -> 1 S\nS ->\n");
  const auto c = brute_force_certificate(g1, 3, 3);
  REQUIRE(c.has_value());
  CHECK(validate_certificate(g1.gvas(), *c).empty());
  CHECK_FALSE(brute_force_certificate(normalized("S -> M S\nS ->\nM -> -1\n", 2), 4, 4).has_value());
  CHECK_THROWS_AS(brute_force_certificate(g1, 9, 3), Error);
  CHECK_THROWS_AS(brute_force_certificate(normalize(testing::fixture_gvas("ackermann_m1.gvas")), 3, 3), Error);
}

TEST_CASE("search agrees with brute force on small grammars") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = random_normalized(seed, 2, 2);
    const bool brute = brute_force_certificate(g, 4, 4).has_value();
    const bool pruned = find_certificate(g, {4, true}).has_value();
    const bool full = find_certificate(g, {4, false}).has_value();
    CHECK(pruned == full);
    if (brute) CHECK(full);
  }
}

TEST_CASE("decide examples") {
  const auto g1 = decide(testing::gvas("S -> 1 S\nS ->\n"));
  CHECK(g1.kind == Verdict::Kind::Unbounded);
  REQUIRE(g1.certificate.has_value());
  CHECK(g1.certificate_cap <= 16);
  CHECK(to_string(g1.kind) == "unbounded");

  const auto dec = decide(testing::fixture_gvas("decreasing.gvas"));
  CHECK(dec.kind == Verdict::Kind::BoundedClosure);
  CHECK(dec.reach_set == std::set<Counter>{0, 1, 2, 3, 4, 5});

  const auto ack = decide(testing::fixture_gvas("ackermann_m2.gvas"));
  CHECK(ack.kind == Verdict::Kind::BoundedClosure);
  CHECK(ack.reach_set == std::set<Counter>{6, 7, 8, 9});
}

TEST_CASE("prefix closure checks") {
  CHECK_FALSE(prefix_closure_violation(normalized("S -> 1 S\nS ->\n"), 4).has_value());
  const auto v = prefix_closure_violation(normalized("S -> 1 1\n"), 3);
  REQUIRE(v.has_value());
  CHECK(*v == Word{1, 1});
}

TEST_CASE("schedules") {
  CHECK(cap_schedule(0, 256) == std::vector<Counter>{16, 64, 256});
  CHECK(cap_schedule(100, 256) == std::vector<Counter>{100, 256});
  CHECK(budget_schedule(0, 128) == std::vector<Counter>{32, 64, 128});
}
