#include "cbound/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "cbound/error.hpp"

namespace cbound {

NtId Grammar::intern(std::string_view name) {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  const auto id = static_cast<NtId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  by_lhs_.emplace_back();
  return id;
}

std::optional<NtId> Grammar::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  return std::nullopt;
}

NtId Grammar::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error("unknown nonterminal '" + std::string(name) + "'");
}

std::string Grammar::fresh_name(std::string_view stem) const {
  for (std::size_t n = 1;; ++n) {
    std::string candidate = std::string(kFreshPrefix) + std::string(stem) + std::to_string(n);
    if (!ids_.contains(candidate)) return candidate;
  }
}

RuleId Grammar::add_rule(NtId lhs, std::vector<Symbol> rhs) {
  if (lhs >= names_.size()) throw Error("rule lhs out of range");
  for (const auto& s : rhs) {
    if (s.is_epsilon()) throw Error("epsilon may not occur inside a rule rhs");
    if (s.is_nonterminal() && s.nt() >= names_.size()) throw Error("rule rhs out of range");
  }
  const auto id = static_cast<RuleId>(rules_.size());
  rules_.push_back(Rule{lhs, std::move(rhs)});
  by_lhs_[lhs].push_back(id);
  return id;
}

std::set<std::int64_t> Grammar::actions() const {
  std::set<std::int64_t> out;
  for (const auto& r : rules_)
    for (const auto& s : r.rhs)
      if (s.is_action()) out.insert(s.value);
  return out;
}

std::string Grammar::symbol_name(const Symbol& s) const {
  switch (s.kind) {
    case Symbol::Kind::Nonterminal: return name(s.nt());
    case Symbol::Kind::Action: return std::to_string(s.value);
    case Symbol::Kind::Epsilon: return "ε";
  }
  return {};
}

bool Grammar::same_as(const Grammar& other) const {
  if (rules_.size() != other.rules_.size()) return false;
  if (names_.size() != other.names_.size()) return false;
  if (name(start_) != other.name(other.start_)) return false;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& a = rules_[i];
    const auto& b = other.rules_[i];
    if (name(a.lhs) != other.name(b.lhs) || a.rhs.size() != b.rhs.size()) return false;
    for (std::size_t k = 0; k < a.rhs.size(); ++k)
      if (symbol_name(a.rhs[k]) != other.symbol_name(b.rhs[k])) return false;
  }
  return true;
}

bool has_normalized_shape(const Grammar& g, std::string* why) {
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    const auto& r = g.rules()[i];
    bool ok = false;
    if (r.rhs.empty()) {
      ok = true;
    } else if (r.rhs.size() == 1) {
      ok = r.rhs[0].is_action() && r.rhs[0].value >= -1 && r.rhs[0].value <= 1;
    } else if (r.rhs.size() == 2) {
      ok = r.rhs[0].is_nonterminal() && r.rhs[1].is_nonterminal();
    }
    if (!ok) {
      if (why) *why = "rule " + std::to_string(i) + " of '" + g.name(r.lhs) +
                      "' is not of shape YZ, a in {-1,0,1}, or eps";
      return false;
    }
  }
  return true;
}

NormalizedGvas NormalizedGvas::check(Gvas g) {
  if (g.c_init < 0) throw Error("initial counter value must be a natural number");
  if (g.grammar.num_nonterminals() == 0) throw Error("grammar has no nonterminals");
  std::string why;
  if (!has_normalized_shape(g.grammar, &why)) throw Error("not normalized: " + why);
  const auto prod = productive_set(g.grammar);
  for (NtId x = 0; x < prod.size(); ++x)
    if (!prod[x]) throw Error("not normalized: nonterminal '" + g.grammar.name(x) + "' is not productive");
  return NormalizedGvas(std::move(g));
}

NormalizedGvas NormalizedGvas::with_start(NtId s) const {
  Gvas copy = g_;
  copy.grammar.set_start(s);
  return NormalizedGvas(std::move(copy));
}

NormalizedGvas NormalizedGvas::with_c_init(Counter c) const {
  if (c < 0) throw Error("initial counter value must be a natural number");
  Gvas copy = g_;
  copy.c_init = c;
  return NormalizedGvas(std::move(copy));
}

std::size_t ParseTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t ParseTree::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height() + 1);
  return h;
}

std::size_t ParseTree::open_leaves() const {
  if (children.empty()) return label.is_nonterminal() ? 1 : 0;
  std::size_t n = 0;
  for (const auto& c : children) n += c.open_leaves();
  return n;
}

std::string path_to_string(const NodePath& p) {
  if (p.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

NodePath path_from_string(std::string_view s) {
  NodePath p;
  if (s.empty() || s == "e" || s == "root" || s == "ε") return p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto dot = s.find('.', pos);
    const auto part = s.substr(pos, dot == std::string_view::npos ? s.size() - pos : dot - pos);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
      throw Error("malformed node path '" + std::string(s) + "'");
    p.push_back(v);
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return p;
}

bool is_strict_prefix(const NodePath& a, const NodePath& b) {
  return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

namespace {

void collect_yield(const ParseTree& t, std::vector<Symbol>& out) {
  if (t.children.empty()) {
    if (!t.label.is_epsilon()) out.push_back(t.label);
    return;
  }
  for (const auto& c : t.children) collect_yield(c, out);
}

bool find_open_leaf(const ParseTree& t, NodePath& path) {
  if (t.children.empty()) return t.label.is_nonterminal();
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(i);
    if (find_open_leaf(t.children[i], path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

std::vector<Symbol> sentential_yield(const ParseTree& tree) {
  std::vector<Symbol> out;
  collect_yield(tree, out);
  return out;
}

Word yield_of(const ParseTree& tree) {
  NodePath open;
  if (find_open_leaf(tree, open))
    throw Error("incomplete parse tree: nonterminal leaf at node " + path_to_string(open));
  Word w;
  for (const auto& s : sentential_yield(tree)) w.push_back(s.value);
  return w;
}

std::int64_t sum_of(const Word& w) { return std::accumulate(w.begin(), w.end(), std::int64_t{0}); }

namespace {

std::string check_node(const Grammar& g, const ParseTree& t, NodePath& path) {
  if (t.children.empty()) {
    if (t.label.is_nonterminal() && t.label.nt() >= g.num_nonterminals())
      return "unknown nonterminal at node " + path_to_string(path);
    return {};
  }
  if (!t.label.is_nonterminal() || t.label.nt() >= g.num_nonterminals())
    return "internal node " + path_to_string(path) + " is not labelled by a nonterminal";
  std::vector<Symbol> labels;
  for (const auto& c : t.children) labels.push_back(c.label);
  const bool eps_child = labels.size() == 1 && labels[0].is_epsilon();
  bool matched = false;
  for (RuleId r : g.rules_of(t.label.nt())) {
    const auto& rhs = g.rule(r).rhs;
    if ((rhs.empty() && eps_child) || rhs == labels) {
      matched = true;
      break;
    }
  }
  if (!matched) return "no rule of '" + g.name(t.label.nt()) + "' matches the children of node " +
                       path_to_string(path);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.children[i].label.is_epsilon() && !eps_child)
      return "epsilon leaf with siblings at node " + path_to_string(path);
    path.push_back(i);
    auto msg = check_node(g, t.children[i], path);
    path.pop_back();
    if (!msg.empty()) return msg;
  }
  return {};
}

}  // namespace

std::string check_parse_tree(const Grammar& g, const ParseTree& tree) {
  NodePath path;
  return check_node(g, tree, path);
}

std::vector<bool> productive_set(const Grammar& g) {
  std::vector<bool> prod(g.num_nonterminals(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules()) {
      if (prod[r.lhs]) continue;
      const bool ok = std::all_of(r.rhs.begin(), r.rhs.end(),
                                  [&](const Symbol& s) { return !s.is_nonterminal() || prod[s.nt()]; });
      if (ok) {
        prod[r.lhs] = true;
        changed = true;
      }
    }
  }
  return prod;
}

Gvas prune_nonproductive(const Gvas& g) {
  const auto& src = g.grammar;
  const auto prod = productive_set(src);
  if (src.num_nonterminals() == 0 || !prod[src.start()]) throw Error("empty language");
  Gvas out;
  out.c_init = g.c_init;
  std::vector<NtId> remap(src.num_nonterminals(), 0);
  for (NtId x = 0; x < src.num_nonterminals(); ++x)
    if (prod[x]) remap[x] = out.grammar.intern(src.name(x));
  for (const auto& r : src.rules()) {
    if (!prod[r.lhs]) continue;
    bool keep = true;
    std::vector<Symbol> rhs;
    for (const auto& s : r.rhs) {
      if (s.is_nonterminal()) {
        if (!prod[s.nt()]) {
          keep = false;
          break;
        }
        rhs.push_back(Symbol::nonterminal(remap[s.nt()]));
      } else {
        rhs.push_back(s);
      }
    }
    if (keep) out.grammar.add_rule(remap[r.lhs], std::move(rhs));
  }
  out.grammar.set_start(remap[src.start()]);
  return out;
}

std::vector<bool> derivable_set(const Grammar& g) {
  std::vector<bool> seen(g.num_nonterminals(), false);
  if (g.num_nonterminals() == 0) return seen;
  std::vector<NtId> stack{g.start()};
  seen[g.start()] = true;
  while (!stack.empty()) {
    const NtId x = stack.back();
    stack.pop_back();
    for (RuleId r : g.rules_of(x))
      for (const auto& s : g.rule(r).rhs)
        if (s.is_nonterminal() && !seen[s.nt()]) {
          seen[s.nt()] = true;
          stack.push_back(s.nt());
        }
  }
  return seen;
}

namespace {

// Recognition table over spans [i, j) of the word. An entry is added only
// once all entries it depends on are present, so backpointers are
// well-founded even with epsilon rules.
class Recognizer {
 public:
  Recognizer(const Grammar& g, const Word& w) : g_(g), w_(w), n_(w.size()) {
    std::string why;
    if (!has_normalized_shape(g, &why)) throw Error("membership requires a normalized grammar: " + why);
    const std::size_t spans = (n_ + 1) * (n_ + 1);
    present_.assign(spans * g.num_nonterminals(), false);
    back_.assign(spans * g.num_nonterminals(), Back{});
    for (std::size_t len = 0; len <= n_; ++len)
      for (std::size_t i = 0; i + len <= n_; ++i) fill(i, i + len);
  }

  bool has(NtId x, std::size_t i, std::size_t j) const { return present_[index(x, i, j)]; }

  ParseTree tree(NtId x, std::size_t i, std::size_t j) const {
    const Back& b = back_[index(x, i, j)];
    const Rule& r = g_.rule(b.rule);
    ParseTree t{Symbol::nonterminal(x), {}};
    if (r.rhs.empty()) {
      t.children.push_back(ParseTree::leaf(Symbol::epsilon()));
    } else if (r.rhs.size() == 1) {
      t.children.push_back(ParseTree::leaf(r.rhs[0]));
    } else {
      t.children.push_back(tree(r.rhs[0].nt(), i, b.split));
      t.children.push_back(tree(r.rhs[1].nt(), b.split, j));
    }
    return t;
  }

 private:
  struct Back {
    RuleId rule = 0;
    std::size_t split = 0;
  };

  std::size_t index(NtId x, std::size_t i, std::size_t j) const {
    return (i * (n_ + 1) + j) * g_.num_nonterminals() + x;
  }

  void fill(std::size_t i, std::size_t j) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (RuleId rid = 0; rid < g_.rules().size(); ++rid) {
        const Rule& r = g_.rule(rid);
        const auto idx = index(r.lhs, i, j);
        if (present_[idx]) continue;
        std::optional<std::size_t> split;
        if (r.rhs.empty()) {
          if (i == j) split = i;
        } else if (r.rhs.size() == 1) {
          if (j == i + 1 && w_[i] == r.rhs[0].value) split = i;
        } else {
          for (std::size_t k = i; k <= j && !split; ++k)
            if (has(r.rhs[0].nt(), i, k) && has(r.rhs[1].nt(), k, j)) split = k;
        }
        if (split) {
          present_[idx] = true;
          back_[idx] = Back{rid, *split};
          changed = true;
        }
      }
    }
  }

  const Grammar& g_;
  const Word& w_;
  std::size_t n_;
  std::vector<bool> present_;
  std::vector<Back> back_;
};

}  // namespace

bool member(const Grammar& g, NtId x, const Word& w) {
  Recognizer rec(g, w);
  return rec.has(x, 0, w.size());
}

std::optional<ParseTree> member_tree(const Grammar& g, NtId x, const Word& w) {
  Recognizer rec(g, w);
  if (!rec.has(x, 0, w.size())) return std::nullopt;
  return rec.tree(x, 0, w.size());
}

}  // namespace cbound
