#include "cbound/flow_tree.hpp"

#include "cbound/error.hpp"

namespace cbound {

std::size_t FlowNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

ParseTree underlying(const FlowNode& ft) {
  ParseTree t{ft.label, {}};
  for (const auto& c : ft.children) t.children.push_back(underlying(c));
  return t;
}

FlowNode with_bottom_annotations(const ParseTree& t) {
  FlowNode n{t.label, ExtNat::bottom(), ExtNat::bottom(), {}};
  for (const auto& c : t.children) n.children.push_back(with_bottom_annotations(c));
  return n;
}

const FlowNode& node_at(const FlowNode& root, const NodePath& p) {
  const FlowNode* cur = &root;
  for (auto i : p) {
    if (i >= cur->children.size()) throw Error("node path " + path_to_string(p) + " does not exist");
    cur = &cur->children[i];
  }
  return *cur;
}

FlowNode& node_at(FlowNode& root, const NodePath& p) {
  return const_cast<FlowNode&>(node_at(static_cast<const FlowNode&>(root), p));
}

std::string describe(const Violation& v) { return "node " + path_to_string(v.path) + ": " + v.message; }

namespace {

std::string show(ExtNat v) { return v.to_string(); }

void check_node(const Grammar& g, const FlowNode& t, NodePath& path, std::vector<Violation>& out) {
  auto fail = [&](std::string msg) { out.push_back(Violation{path, std::move(msg)}); };

  if (t.children.empty()) {
    switch (t.label.kind) {
      case Symbol::Kind::Nonterminal: fail("nonterminal leaf: tree is not complete"); break;
      case Symbol::Kind::Action:
        if (!leq_shifted(t.out, t.in, t.label.value))
          fail("leaf out <= in + a fails: " + show(t.out) + " > " + show(t.in) + " + (" +
               std::to_string(t.label.value) + ")");
        break;
      case Symbol::Kind::Epsilon:
        if (!(t.out <= t.in)) fail("epsilon leaf out <= in fails: " + show(t.out) + " > " + show(t.in));
        break;
    }
    return;
  }

  if (!t.label.is_nonterminal() || t.label.nt() >= g.num_nonterminals()) {
    fail("internal node is not labelled by a nonterminal");
    return;
  }
  std::vector<Symbol> labels;
  for (const auto& c : t.children) labels.push_back(c.label);
  const bool eps_child = labels.size() == 1 && labels[0].is_epsilon();
  bool matched = false;
  for (RuleId r : g.rules_of(t.label.nt())) {
    const auto& rhs = g.rule(r).rhs;
    if ((rhs.empty() && eps_child) || rhs == labels) matched = true;
  }
  if (!matched) fail("children do not match any rule of '" + g.name(t.label.nt()) + "'");

  const auto k = t.children.size() - 1;
  if (!(t.children[0].in <= t.in))
    fail("in(first child) <= in fails: " + show(t.children[0].in) + " > " + show(t.in));
  if (!(t.out <= t.children[k].out))
    fail("out <= out(last child) fails: " + show(t.out) + " > " + show(t.children[k].out));
  for (std::size_t j = 0; j < k; ++j)
    if (!(t.children[j + 1].in <= t.children[j].out))
      fail("in(child " + std::to_string(j + 1) + ") <= out(child " + std::to_string(j) + ") fails: " +
           show(t.children[j + 1].in) + " > " + show(t.children[j].out));

  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.children[i].label.is_epsilon() && !eps_child) {
      path.push_back(i);
      fail("epsilon leaf with siblings");
      path.pop_back();
      continue;
    }
    path.push_back(i);
    check_node(g, t.children[i], path, out);
    path.pop_back();
  }
}

std::optional<const FlowNode*> find_node(const FlowNode& root, const NodePath& p) {
  const FlowNode* cur = &root;
  for (auto i : p) {
    if (i >= cur->children.size()) return std::nullopt;
    cur = &cur->children[i];
  }
  return cur;
}

void good_scan(const FlowNode& t, NodePath& path, std::vector<std::pair<const FlowNode*, NodePath>>& anc,
               std::optional<NodePair>& found) {
  if (found) return;
  for (const auto& [a, apath] : anc) {
    if (a->label == t.label && a->in <= t.in) {
      found = NodePair{apath, path};
      return;
    }
  }
  if (!t.label.is_nonterminal()) return;
  anc.emplace_back(&t, path);
  for (std::size_t i = 0; i < t.children.size() && !found; ++i) {
    path.push_back(i);
    good_scan(t.children[i], path, anc, found);
    path.pop_back();
  }
  anc.pop_back();
}

void rank_scan(const FlowNode& t, Rank& r) {
  if (t.in.is_finite()) {
    ++r.first;
    r.second += t.in.value();
  }
  if (t.out.is_finite()) {
    ++r.first;
    r.second += t.out.value();
  }
  for (const auto& c : t.children) rank_scan(c, r);
}

}  // namespace

std::vector<Violation> check_flow_conditions(const Grammar& g, const FlowTree& ft) {
  std::vector<Violation> out;
  NodePath path;
  check_node(g, ft, path, out);
  return out;
}

std::vector<Violation> validate_flow_tree(const Gvas& g, const FlowTree& ft) {
  std::vector<Violation> out;
  if (!ft.label.is_nonterminal() || ft.label.nt() != g.grammar.start())
    out.push_back(Violation{{}, "root is not labelled by the start symbol"});
  if (ft.in != ExtNat(g.c_init))
    out.push_back(Violation{{}, "root in = c_init fails: " + show(ft.in) + " != " + std::to_string(g.c_init)});
  auto rest = check_flow_conditions(g.grammar, ft);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<Violation> validate_certificate(const Gvas& g, const Certificate& cert) {
  auto out = validate_flow_tree(g, cert.flow);
  const auto s = find_node(cert.flow, cert.s);
  const auto t = find_node(cert.flow, cert.t);
  if (!s) out.push_back(Violation{cert.s, "marked node s does not exist"});
  if (!t) out.push_back(Violation{cert.t, "marked node t does not exist"});
  if (!s || !t) return out;
  if (!is_strict_prefix(cert.s, cert.t))
    out.push_back(Violation{cert.t, "s is not a proper ancestor of t"});
  const FlowNode& ns = **s;
  const FlowNode& nt = **t;
  if (ns.label != nt.label || !ns.label.is_nonterminal())
    out.push_back(Violation{cert.t, "symbol mismatch between s and t"});
  if (!(ns.in <= nt.in))
    out.push_back(Violation{cert.t, "in(s) <= in(t) fails: " + show(ns.in) + " > " + show(nt.in)});
  if (!(ns.in < nt.in) && !(nt.out < ns.out))
    out.push_back(Violation{cert.t, "neither strict condition holds: in(s) < in(t) and out(t) < out(s) both fail"});
  return out;
}

std::optional<NodePair> is_good(const FlowTree& ft) {
  std::optional<NodePair> found;
  NodePath path;
  std::vector<std::pair<const FlowNode*, NodePath>> anc;
  good_scan(ft, path, anc, found);
  return found;
}

Rank rank_of(const FlowTree& ft) {
  Rank r;
  rank_scan(ft, r);
  return r;
}

}  // namespace cbound
