#include "cbound/displacement.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cbound/error.hpp"

namespace cbound {

namespace {

constexpr std::int64_t kNeg = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kSat = std::int64_t{1} << 61;

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kNeg || b == kNeg) return kNeg;
  return std::clamp(a + b, -kSat, kSat);
}

// Round r holds the best sum over trees of height <= r and the rule that
// achieved it from round r-1 (lowest rule index on ties).
struct Round {
  std::vector<std::int64_t> val;
  std::vector<RuleId> via;
};

class Kleene {
 public:
  explicit Kleene(const NormalizedGvas& g) : g_(g.grammar()) {
    const auto n = g_.num_nonterminals();
    rounds_.push_back(Round{std::vector<std::int64_t>(n, kNeg), std::vector<RuleId>(n, 0)});
  }

  std::size_t last() const { return rounds_.size() - 1; }
  std::int64_t val(std::size_t r, NtId x) const { return rounds_[r].val[x]; }
  RuleId via(std::size_t r, NtId x) const { return rounds_[r].via[x]; }

  void advance() {
    const Round& prev = rounds_.back();
    const auto n = g_.num_nonterminals();
    Round next{std::vector<std::int64_t>(n, kNeg), std::vector<RuleId>(n, 0)};
    for (NtId x = 0; x < n; ++x) {
      for (RuleId r : g_.rules_of(x)) {
        const auto& rhs = g_.rule(r).rhs;
        std::int64_t v = 0;
        if (rhs.size() == 1) v = rhs[0].value;
        else if (rhs.size() == 2) v = sat_add(prev.val[rhs[0].nt()], prev.val[rhs[1].nt()]);
        if (v != kNeg && v > next.val[x]) {
          next.val[x] = v;
          next.via[x] = r;
        }
      }
    }
    rounds_.push_back(std::move(next));
  }

  void run_to(std::size_t r) {
    while (last() < r) advance();
  }

  // Earliest round at which x already held its round-r value.
  std::size_t first_achieving(std::size_t r, NtId x) const {
    while (r > 0 && rounds_[r - 1].val[x] == rounds_[r].val[x]) --r;
    return r;
  }

  std::size_t first_finite(NtId x) const {
    for (std::size_t r = 0; r <= last(); ++r)
      if (rounds_[r].val[x] != kNeg) return r;
    throw Error("nonterminal '" + g_.name(x) + "' is not productive");
  }

  // Tree of height <= r whose yield sums to val(r, x).
  ParseTree build(NtId x, std::size_t r) const {
    r = first_achieving(r, x);
    return expand(x, via(r, x), [&](NtId c) { return build(c, r - 1); });
  }

  ParseTree earliest(NtId x) const {
    const auto r = first_finite(x);
    return expand(x, via(r, x), [&](NtId c) { return earliest(c); });
  }

  template <class F>
  ParseTree expand(NtId x, RuleId rule, F&& child) const {
    ParseTree t{Symbol::nonterminal(x), {}};
    const auto& rhs = g_.rule(rule).rhs;
    if (rhs.empty()) {
      t.children.push_back(ParseTree::leaf(Symbol::epsilon()));
    } else if (rhs.size() == 1) {
      t.children.push_back(ParseTree::leaf(rhs[0]));
    } else {
      for (const auto& s : rhs) t.children.push_back(child(s.nt()));
    }
    return t;
  }

  const Grammar& grammar() const { return g_; }

 private:
  const Grammar& g_;
  std::vector<Round> rounds_;
};

bool elementary_from(const ParseTree& t, std::vector<std::size_t>& on_path) {
  if (!t.label.is_nonterminal()) return true;
  auto& count = on_path[t.label.nt()];
  if (count > 0) return false;
  ++count;
  bool ok = true;
  for (const auto& c : t.children) ok = ok && elementary_from(c, on_path);
  --count;
  return ok;
}

bool splice_into(ParseTree& host, const ParseTree& plug) {
  if (host.label.is_nonterminal() && host.children.empty()) {
    if (host.label != plug.label) throw Error("splice: open leaf label does not match plug root");
    host = plug;
    return true;
  }
  for (auto& c : host.children)
    if (splice_into(c, plug)) return true;
  return false;
}

std::int64_t partial_sum(const ParseTree& t) {
  std::int64_t s = 0;
  for (const auto& sym : sentential_yield(t))
    if (sym.is_action()) s += sym.value;
  return s;
}

}  // namespace

DisplacementTable displacement_table(const NormalizedGvas& g) {
  const auto n = g.num_nonterminals();
  Kleene k(g);
  k.run_to(n);

  DisplacementTable out;
  out.value.resize(n);
  for (NtId x = 0; x < n; ++x) {
    if (k.val(n, x) == kNeg) throw Error("nonterminal '" + g.grammar().name(x) + "' is not productive");
    out.value[x] = ExtValue(k.val(n, x));
  }

  // After |V| rounds every finite displacement is final, so any symbol that
  // still grows has displacement +inf.
  const auto& gr = g.grammar();
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<ExtValue> next(n, ExtValue::bottom());
    for (NtId x = 0; x < n; ++x) {
      for (RuleId r : gr.rules_of(x)) {
        const auto& rhs = gr.rule(r).rhs;
        ExtValue v(0);
        if (rhs.size() == 1) v = ExtValue(rhs[0].value);
        else if (rhs.size() == 2) v = out.value[rhs[0].nt()] + out.value[rhs[1].nt()];
        next[x] = std::max(next[x], v);
      }
    }
    for (NtId x = 0; x < n; ++x) {
      if (next[x] > out.value[x] && !out.value[x].is_top()) {
        out.value[x] = ExtValue::top();
        changed = true;
      }
    }
  }
  return out;
}

ParseTree elementary_tree(const NormalizedGvas& g, NtId x) {
  const auto table = displacement_table(g);
  if (table[x].is_top())
    throw Error("displacement of '" + g.grammar().name(x) + "' is +inf; use find_positive_pump instead");
  Kleene k(g);
  k.run_to(g.num_nonterminals());
  return k.build(x, g.num_nonterminals());
}

ParseTree earliest_tree(const NormalizedGvas& g, NtId x) {
  Kleene k(g);
  k.run_to(g.num_nonterminals());
  return k.earliest(x);
}

std::optional<PumpWitness> find_positive_pump(const NormalizedGvas& g) {
  const auto table = displacement_table(g);
  const NtId start = g.start();
  if (!table[start].is_top()) return std::nullopt;

  const std::size_t n = g.num_nonterminals();
  Kleene k(g);
  k.run_to(n);
  const std::size_t limit = 64 * (n + 1);
  while (k.val(k.last(), start) <= k.val(n, start)) {
    if (k.last() >= limit) throw Error("pump extraction did not converge");
    k.advance();
  }

  // Descend from (start, K). Along the way every node's value is new in its
  // round, and a binary rule always has a child whose value is new one round
  // earlier.
  struct Step {
    NtId sym;
    std::size_t round;
    std::size_t child;  // index of the path child in the rule
  };
  std::vector<Step> path;
  NtId cur = start;
  for (std::size_t r = k.last(); r >= 1; --r) {
    const auto& rhs = g.grammar().rule(k.via(r, cur)).rhs;
    Step st{cur, r, 0};
    if (rhs.size() == 2) {
      st.child = (k.val(r - 1, rhs[0].nt()) > k.val(r - 2, rhs[0].nt())) ? 0 : 1;
      path.push_back(st);
      cur = rhs[st.child].nt();
    } else {
      path.push_back(st);
      break;
    }
  }

  // Rounds |V|+1 .. 1 hold |V|+1 nodes, so some symbol repeats.
  std::size_t first = 0;
  while (path[first].round > n + 1) ++first;
  std::size_t si = path.size(), ti = path.size();
  for (std::size_t j = first; j < path.size() && ti == path.size(); ++j)
    for (std::size_t i = first; i < j; ++i)
      if (path[i].sym == path[j].sym) {
        si = i;
        ti = j;
        break;
      }
  if (ti == path.size()) throw Error("pump extraction found no repeated symbol");

  // Any rotation of the cycle pumps with the same gain; anchor it at the
  // symbol closest to the start.
  const auto& gr = g.grammar();
  std::vector<std::size_t> depth(n, n + 1);
  std::deque<NtId> queue{start};
  depth[start] = 0;
  while (!queue.empty()) {
    const NtId x = queue.front();
    queue.pop_front();
    for (RuleId r : gr.rules_of(x))
      for (const auto& sym : gr.rule(r).rhs)
        if (sym.is_nonterminal() && depth[sym.nt()] > depth[x] + 1) {
          depth[sym.nt()] = depth[x] + 1;
          queue.push_back(sym.nt());
        }
  }
  std::size_t mi = si;
  for (std::size_t j = si; j < ti; ++j)
    if (depth[path[j].sym] < depth[path[mi].sym]) mi = j;
  std::vector<Step> cycle(path.begin() + static_cast<std::ptrdiff_t>(mi), path.begin() + static_cast<std::ptrdiff_t>(ti));
  cycle.insert(cycle.end(), path.begin() + static_cast<std::ptrdiff_t>(si), path.begin() + static_cast<std::ptrdiff_t>(mi));

  PumpWitness w;
  w.anchor = path[mi].sym;
  w.gain = k.val(path[si].round, path[si].sym) - k.val(path[ti].round, path[ti].sym);

  // Build the pump from the bottom up: the open leaf closes the cycle.
  ParseTree acc = ParseTree::leaf(Symbol::nonterminal(w.anchor));
  for (std::size_t j = cycle.size(); j-- > 0;) {
    const auto& st = cycle[j];
    const auto& rhs = gr.rule(k.via(st.round, st.sym)).rhs;
    ParseTree node{Symbol::nonterminal(st.sym), {}};
    for (std::size_t c = 0; c < 2; ++c) {
      if (c == st.child) node.children.push_back(std::move(acc));
      else node.children.push_back(k.build(rhs[c].nt(), st.round - 1));
    }
    acc = std::move(node);
  }
  w.pump_tree = std::move(acc);
  w.context_tree = derivability_witness(g, w.anchor);
  return w;
}

ParseTree derivability_witness(const NormalizedGvas& g, NtId x) {
  const auto& gr = g.grammar();
  const auto n = gr.num_nonterminals();
  struct Parent {
    NtId from;
    RuleId rule;
    std::size_t pos;
  };
  std::vector<std::optional<Parent>> parent(n);
  std::vector<bool> seen(n, false);
  std::deque<NtId> queue{g.start()};
  seen[g.start()] = true;
  while (!queue.empty()) {
    const NtId w = queue.front();
    queue.pop_front();
    for (RuleId r : gr.rules_of(w)) {
      const auto& rhs = gr.rule(r).rhs;
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (!rhs[i].is_nonterminal() || seen[rhs[i].nt()]) continue;
        seen[rhs[i].nt()] = true;
        parent[rhs[i].nt()] = Parent{w, r, i};
        queue.push_back(rhs[i].nt());
      }
    }
  }
  if (!seen[x]) throw Error("nonterminal '" + gr.name(x) + "' is not derivable from the start symbol");

  Kleene k(g);
  k.run_to(n);
  ParseTree acc = ParseTree::leaf(Symbol::nonterminal(x));
  for (NtId cur = x; parent[cur];) {
    const auto& p = *parent[cur];
    ParseTree node{Symbol::nonterminal(p.from), {}};
    const auto& rhs = gr.rule(p.rule).rhs;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (i == p.pos) node.children.push_back(std::move(acc));
      else node.children.push_back(k.earliest(rhs[i].nt()));
    }
    acc = std::move(node);
    cur = p.from;
  }
  return acc;
}

std::vector<ParseTree> derive_witness(const NormalizedGvas& g, const std::vector<NtId>& starts) {
  if (starts.empty()) throw Error("derive_witness needs at least one start symbol");
  const auto table = displacement_table(g);
  Kleene k(g);
  k.run_to(g.num_nonterminals());

  std::optional<std::size_t> p;
  for (std::size_t j = 0; j < starts.size() && !p; ++j)
    if (table[starts[j]].is_top()) p = j;

  std::vector<ParseTree> out;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    if (table[starts[j]].is_top()) out.push_back(k.earliest(starts[j]));
    else out.push_back(k.build(starts[j], g.num_nonterminals()));
  }
  if (!p) return out;

  const auto pump = find_positive_pump(g.with_start(starts[*p]));
  if (!pump) throw Error("no pump below a symbol with infinite displacement");
  const ParseTree tail = k.earliest(pump->anchor);

  std::int64_t base = partial_sum(pump->context_tree) + partial_sum(tail);
  for (std::size_t j = 0; j < starts.size(); ++j)
    if (j != *p) base += partial_sum(out[j]);
  const std::int64_t copies = base > 0 ? 0 : (-base) / pump->gain + 1;

  ParseTree acc = tail;
  for (std::int64_t i = 0; i < copies; ++i) acc = splice(pump->pump_tree, acc);
  out[*p] = splice(pump->context_tree, acc);
  return out;
}

ParseTree splice(const ParseTree& host, const ParseTree& plug) {
  ParseTree out = host;
  if (!splice_into(out, plug)) throw Error("splice: host has no open leaf");
  return out;
}

bool is_elementary(const ParseTree& t) {
  std::size_t max_id = 0;
  auto scan = [&](auto&& self, const ParseTree& n) -> void {
    if (n.label.is_nonterminal()) max_id = std::max<std::size_t>(max_id, n.label.nt());
    for (const auto& c : n.children) self(self, c);
  };
  scan(scan, t);
  std::vector<std::size_t> on_path(max_id + 1, 0);
  return elementary_from(t, on_path);
}

}  // namespace cbound
