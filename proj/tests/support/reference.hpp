#pragma once

// Test-only reference implementations. They share type definitions with the
// library and nothing else.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cbound/ext_value.hpp"
#include "cbound/flow_tree.hpp"
#include "cbound/grammar.hpp"

namespace ref {

using cbound::Counter;
using cbound::ExtNat;
using cbound::FlowNode;
using cbound::Grammar;
using cbound::NodePath;
using cbound::NtId;
using cbound::Symbol;

inline std::string fixture_path(const std::string& name) { return std::string(CBOUND_FIXTURES_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream f(fixture_path(name));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A_0(n) = n + 1, A_m(n) = A_{m-1}^{n+1}(1).
inline std::int64_t ackermann(int m, std::int64_t n) {
  if (m == 0) return n + 1;
  std::int64_t v = 1;
  for (std::int64_t i = 0; i <= n; ++i) v = ackermann(m - 1, v);
  return v;
}

// -1 encodes -inf in the scans below.
inline std::int64_t enc(ExtNat v) { return v.is_bottom() ? -1 : v.value(); }

inline bool le(ExtNat a, ExtNat b) { return enc(a) <= enc(b); }

inline bool rule_exists(const Grammar& g, const FlowNode& n) {
  if (!n.label.is_nonterminal()) return false;
  for (const auto& r : g.rules()) {
    if (r.lhs != n.label.nt()) continue;
    if (r.rhs.empty()) {
      if (n.children.size() == 1 && n.children[0].label.is_epsilon()) return true;
      continue;
    }
    if (r.rhs.size() != n.children.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < r.rhs.size(); ++i) same = same && r.rhs[i] == n.children[i].label;
    if (same) return true;
  }
  return false;
}

inline bool local_ok(const Grammar& g, const FlowNode& n) {
  if (n.children.empty()) {
    if (n.label.is_nonterminal()) return false;
    if (n.out.is_bottom()) return true;
    if (n.in.is_bottom()) return false;
    const std::int64_t a = n.label.is_action() ? n.label.value : 0;
    return n.out.value() <= n.in.value() + a;
  }
  if (!rule_exists(g, n)) return false;
  if (!le(n.children.front().in, n.in)) return false;
  if (!le(n.out, n.children.back().out)) return false;
  for (std::size_t j = 0; j + 1 < n.children.size(); ++j)
    if (!le(n.children[j + 1].in, n.children[j].out)) return false;
  return std::all_of(n.children.begin(), n.children.end(), [&](const FlowNode& c) { return local_ok(g, c); });
}

inline bool flow_tree_ok(const Grammar& g, Counter c_init, const FlowNode& root) {
  return root.label == Symbol::nonterminal(g.start()) && root.in == ExtNat(c_init) && local_ok(g, root);
}

inline const FlowNode* at(const FlowNode& root, const NodePath& p) {
  const FlowNode* n = &root;
  for (auto i : p) {
    if (i >= n->children.size()) return nullptr;
    n = &n->children[i];
  }
  return n;
}

inline bool certificate_ok(const Grammar& g, Counter c_init, const FlowNode& root, const NodePath& s, const NodePath& t) {
  if (!flow_tree_ok(g, c_init, root)) return false;
  if (s.size() >= t.size() || !std::equal(s.begin(), s.end(), t.begin())) return false;
  const FlowNode* ns = at(root, s);
  const FlowNode* nt = at(root, t);
  if (!ns || !nt || ns->label != nt->label || !ns->label.is_nonterminal()) return false;
  const auto is = enc(ns->in), it = enc(nt->in), os = enc(ns->out), ot = enc(nt->out);
  if (is > it) return false;
  // -inf < -inf is false
  const bool strict_in = is < it;
  const bool strict_out = ot < os;
  return strict_in || strict_out;
}

inline void collect(const FlowNode& n, NodePath& p, std::vector<std::pair<NodePath, const FlowNode*>>& out) {
  out.emplace_back(p, &n);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    p.push_back(i);
    collect(n.children[i], p, out);
    p.pop_back();
  }
}

// Exhaustive ancestor-pair scan.
inline bool is_good(const FlowNode& root) {
  std::vector<std::pair<NodePath, const FlowNode*>> all;
  NodePath p;
  collect(root, p, all);
  for (const auto& [ps, ns] : all) {
    for (const auto& [pt, nt] : all) {
      if (ps.size() >= pt.size() || !std::equal(ps.begin(), ps.end(), pt.begin())) continue;
      if (ns->label.is_nonterminal() && ns->label == nt->label && le(ns->in, nt->in)) return true;
    }
  }
  return false;
}

inline std::pair<std::int64_t, std::int64_t> rank(const FlowNode& n) {
  std::pair<std::int64_t, std::int64_t> r{0, 0};
  for (auto v : {n.in, n.out}) {
    if (v.is_finite()) {
      ++r.first;
      r.second += v.value();
    }
  }
  for (const auto& c : n.children) {
    auto s = rank(c);
    r.first += s.first;
    r.second += s.second;
  }
  return r;
}

// Per X: largest yield sum over complete trees rooted at X of height <= h
// (edges), by recursion on the height. nullopt when no such tree exists.
inline std::vector<std::optional<std::int64_t>> best_sum_up_to_height(const Grammar& g, std::size_t h) {
  const auto n = g.num_nonterminals();
  std::vector<std::optional<std::int64_t>> cur(n);
  for (std::size_t round = 1; round <= h; ++round) {
    std::vector<std::optional<std::int64_t>> next(n);
    for (const auto& r : g.rules()) {
      std::optional<std::int64_t> sum = 0;
      for (const auto& s : r.rhs) {
        if (!sum) break;
        if (s.is_action()) *sum += s.value;
        else if (s.is_nonterminal()) sum = cur[s.nt()] ? std::optional(*sum + *cur[s.nt()]) : std::nullopt;
      }
      if (sum && (!next[r.lhs] || *next[r.lhs] < *sum)) next[r.lhs] = sum;
    }
    cur = std::move(next);
  }
  return cur;
}

// L(G[X]) restricted to words of length <= max_len, by fixpoint over rules.
inline std::vector<std::set<cbound::Word>> words_up_to(const Grammar& g, std::size_t max_len) {
  std::vector<std::set<cbound::Word>> lang(g.num_nonterminals());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : g.rules()) {
      std::set<cbound::Word> acc{{}};
      for (const auto& s : r.rhs) {
        std::set<cbound::Word> next;
        for (const auto& w : acc) {
          if (s.is_action()) {
            if (w.size() < max_len) {
              auto v = w;
              v.push_back(s.value);
              next.insert(v);
            }
          } else if (s.is_nonterminal()) {
            for (const auto& u : lang[s.nt()]) {
              if (w.size() + u.size() > max_len) continue;
              auto v = w;
              v.insert(v.end(), u.begin(), u.end());
              next.insert(v);
            }
          }
        }
        acc = std::move(next);
      }
      for (const auto& w : acc) changed = lang[r.lhs].insert(w).second || changed;
    }
  }
  return lang;
}

// All words over {-1, 0, 1} of length <= n.
inline std::vector<cbound::Word> small_words(std::size_t n) {
  std::vector<cbound::Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == n) continue;
    for (std::int64_t a : {-1, 0, 1}) {
      auto w = out[i];
      w.push_back(a);
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace ref
