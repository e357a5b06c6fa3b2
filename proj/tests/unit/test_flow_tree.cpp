#include "doctest.h"

#include <random>

#include "cbound/displacement.hpp"
#include "cbound/error.hpp"
#include "cbound/oracle.hpp"
#include "cbound/random_instances.hpp"
#include "cbound/tree_json.hpp"
#include "helpers.hpp"

using namespace cbound;

namespace {

struct Example {
  Gvas g;
  FlowTree ft;
};

Example example() {
  const auto doc = parse_tree_document(ref::read_fixture("example_flow_tree.json"));
  Example f{parse_gvas(*doc.gvas), {}};
  f.ft = flow_from_json(f.g.grammar, doc.tree);
  return f;
}

// G1 normalized by hand: S -> U S | eps, U -> 1.
Gvas g1_cnf() { return testing::gvas("S -> U S\nS ->\nU -> 1\n"); }

FlowNode fnode(Symbol s, ExtNat in, ExtNat out, std::vector<FlowNode> kids = {}) {
  return FlowNode{s, in, out, std::move(kids)};
}

Certificate g1_certificate(const Gvas& g) {
  const auto S = Symbol::nonterminal(g.grammar.at("S"));
  const auto U = Symbol::nonterminal(g.grammar.at("U"));
  const auto bot = ExtNat::bottom();
  auto eps = fnode(S, 1, bot, {fnode(Symbol::epsilon(), bot, bot)});
  auto u = fnode(U, 0, 1, {fnode(Symbol::action(1), 0, 1)});
  return Certificate{fnode(S, 0, bot, {u, eps}), {}, {1}};
}

void annotate(FlowNode& n, std::mt19937_64& rng) {
  auto pick = [&]() -> ExtNat {
    const auto v = static_cast<std::int64_t>(rng() % 6) - 1;
    return v < 0 ? ExtNat::bottom() : ExtNat(v);
  };
  n.in = pick();
  n.out = pick();
  for (auto& c : n.children) annotate(c, rng);
}

bool has_message(const std::vector<Violation>& vs, const std::string& needle) {
  for (const auto& v : vs)
    if (v.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_flow_tree on the example tree") {
  auto f = example();
  CHECK(validate_flow_tree(f.g, f.ft).empty());

  node_at(f.ft, {0}).out = 6;
  const auto vs = validate_flow_tree(f.g, f.ft);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].path == NodePath{0});
  CHECK(vs[0].message.find("leaf out <= in + a") != std::string::npos);
  CHECK_FALSE(ref::flow_tree_ok(f.g.grammar, f.g.c_init, f.ft));
}

TEST_CASE("bottom annotations are always valid below the root") {
  auto f = example();
  auto t = with_bottom_annotations(underlying(f.ft));
  CHECK_FALSE(validate_flow_tree(f.g, t).empty());  // root in is -inf
  t.in = f.g.c_init;
  CHECK(validate_flow_tree(f.g, t).empty());
  CHECK(rank_of(t) == Rank{1, f.g.c_init});
}

TEST_CASE("validator rejects shape errors") {
  auto f = example();
  auto t = f.ft;
  t.children.pop_back();
  CHECK_FALSE(validate_flow_tree(f.g, t).empty());
  auto open = f.ft;
  node_at(open, {2}).children.clear();
  CHECK_FALSE(validate_flow_tree(f.g, open).empty());
  auto wrong_root = f.ft;
  wrong_root.in = 4;
  CHECK(has_message(validate_flow_tree(f.g, wrong_root), "root in = c_init"));
}

TEST_CASE("validator agrees with the reference on random annotations") {
  std::size_t valid = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = random_normalized(seed % 60, 3, 2);
    std::mt19937_64 rng(seed);
    auto ft = with_bottom_annotations(earliest_tree(g, g.start()));
    annotate(ft, rng);
    if (rng() % 2) ft.in = g.c_init();
    const bool ok = validate_flow_tree(g.gvas(), ft).empty();
    CHECK(ok == ref::flow_tree_ok(g.grammar(), g.c_init(), ft));
    CHECK(check_flow_conditions(g.grammar(), ft).empty() == ref::local_ok(g.grammar(), ft));
    valid += ok;
  }
  CHECK(valid > 0);
}

TEST_CASE("is_good examples") {
  const auto f = example();
  CHECK_FALSE(is_good(f.ft).has_value());

  const auto g = g1_cnf();
  const auto c = g1_certificate(g);
  const auto pair = is_good(c.flow);
  REQUIRE(pair.has_value());
  CHECK(pair->s == NodePath{});
  CHECK(pair->t == NodePath{1});

  const auto t = fnode(Symbol::nonterminal(0), 0, 1,
                       {fnode(Symbol::nonterminal(1), 0, 1, {fnode(Symbol::action(1), 0, 1)})});
  CHECK_FALSE(is_good(t).has_value());
}

TEST_CASE("is_good agrees with the exhaustive pair scan") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = random_normalized(seed % 80, 3, 0);
    std::mt19937_64 rng(seed);
    const auto trees = derive_witness(g, {g.start()});
    auto ft = with_bottom_annotations(trees[0]);
    annotate(ft, rng);
    const auto pair = is_good(ft);
    CHECK(pair.has_value() == ref::is_good(ft));
    if (pair) {
      CHECK(is_strict_prefix(pair->s, pair->t));
      const auto& s = node_at(ft, pair->s);
      const auto& t = node_at(ft, pair->t);
      CHECK(s.label == t.label);
      CHECK(s.in <= t.in);
    }
  }
}

TEST_CASE("certificate validation") {
  const auto g = g1_cnf();
  auto c = g1_certificate(g);
  CHECK(validate_certificate(g, c).empty());
  CHECK(ref::certificate_ok(g.grammar, g.c_init, c.flow, c.s, c.t));

  auto flat = c;
  node_at(flat.flow, {1}).in = 0;
  CHECK(has_message(validate_certificate(g, flat), "neither strict condition holds"));

  auto mismatch = c;
  mismatch.t = {0};
  CHECK(has_message(validate_certificate(g, mismatch), "symbol mismatch"));

  auto not_ancestor = c;
  not_ancestor.s = {1};
  CHECK_FALSE(validate_certificate(g, not_ancestor).empty());

  auto missing = c;
  missing.t = {4};
  CHECK_FALSE(validate_certificate(g, missing).empty());
}

TEST_CASE("rank") {
  const auto f = example();
  CHECK(rank_of(f.ft) == Rank{12, 53});
  const auto r = ref::rank(f.ft);
  CHECK(r.first == 12);
  CHECK(r.second == 53);
  CHECK(Rank{3, 100} < Rank{4, 0});
}

TEST_CASE("lowering any finite annotation lowers the rank") {
  const auto f = example();
  const auto base = rank_of(f.ft);
  std::vector<NodePath> paths;
  auto walk = [&](auto&& self, const FlowNode& n, NodePath& p) -> void {
    paths.push_back(p);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      p.push_back(i);
      self(self, n.children[i], p);
      p.pop_back();
    }
  };
  NodePath p;
  walk(walk, f.ft, p);
  std::size_t mutations = 0;
  for (const auto& path : paths) {
    for (int side = 0; side < 2; ++side) {
      auto t = f.ft;
      auto& v = side == 0 ? node_at(t, path).in : node_at(t, path).out;
      if (v.is_bottom()) continue;
      v = ExtNat::bottom();
      CHECK(rank_of(t) < base);
      ++mutations;
    }
  }
  CHECK(mutations == 12);
}

TEST_CASE("finite outputs imply finite inputs on valid trees") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = random_normalized(seed, 3, 3);
    const auto table = reach_table(g, 32);
    for (Counter d : table.entry(g.start(), g.c_init())) {
      const auto ft = table.witness_flow(g.start(), g.c_init(), d);
      REQUIRE(ft.has_value());
      auto check = [&](auto&& self, const FlowNode& n) -> void {
        if (n.out.is_finite()) CHECK(n.in.is_finite());
        for (const auto& c : n.children) self(self, c);
      };
      check(check, *ft);
    }
  }
}

TEST_CASE("build_flow_tree") {
  const auto ack = normalize(testing::fixture_gvas("ackermann_m1.gvas"));
  const auto& gr = ack.grammar();
  const auto x0 = build_flow_tree(ack, gr.at("X0"), 4, 5);
  CHECK(x0 == fnode(Symbol::nonterminal(gr.at("X0")), 4, 5, {fnode(Symbol::action(1), 4, 5)}));

  const auto x1 = build_flow_tree(ack, gr.at("X1"), 5, 7);
  CHECK(check_flow_conditions(gr, x1).empty());
  CHECK(x1.in == ExtNat(5));
  CHECK(x1.out == ExtNat(7));
  CHECK(validate_flow_tree(ack.with_start(gr.at("X1")).with_c_init(5).gvas(), x1).empty());
  CHECK_THROWS_AS(build_flow_tree(ack, gr.at("X1"), 5, 6), Error);

  const auto e = normalize(testing::gvas("S -> E\nE ->\n"));
  const auto t = build_flow_tree(e, e.start(), 3, 3);
  CHECK(check_flow_conditions(e.grammar(), t).empty());
  CHECK(underlying(t).open_leaves() == 0);
  CHECK(yield_of(underlying(t)).empty());
}

TEST_CASE("tree JSON round trip") {
  const auto f = example();
  const auto j = to_json(f.g.grammar, f.ft);
  CHECK(flow_from_json(f.g.grammar, j) == f.ft);
  CHECK(j["out"] == "-inf");
  CHECK(j["children"][0]["sym"] == -1);

  const auto g = g1_cnf();
  const auto c = g1_certificate(g);
  const auto doc = certificate_document(g, c);
  const auto back = parse_tree_document(doc.dump());
  REQUIRE(back.gvas.has_value());
  const auto bg = parse_gvas(*back.gvas);
  CHECK(flow_from_json(bg.grammar, back.tree) == c.flow);
  CHECK(back.s == c.s);
  CHECK(back.t == c.t);
  CHECK(path_from_json(nlohmann::json("0.1")) == NodePath{0, 1});
  CHECK_THROWS_AS(flow_from_json(g.grammar, nlohmann::json{{"sym", "Nope"}}), Error);
  CHECK_THROWS_AS(flow_from_json(g.grammar, nlohmann::json{{"sym", "S"}, {"in", -3}}), Error);
}

TEST_CASE("dot rendering marks s and t") {
  const auto g = g1_cnf();
  const auto c = g1_certificate(g);
  const auto dot = to_dot(g.grammar, c.flow, c.s, c.t);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("lightblue") != std::string::npos);
  CHECK(dot.find("orange") != std::string::npos);
}
