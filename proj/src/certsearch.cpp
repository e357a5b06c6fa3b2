#include "cbound/certsearch.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "cbound/error.hpp"
#include "cbound/maxout.hpp"

namespace cbound {

Counter theoretical_cap(std::size_t num_nonterminals, Counter c_init) {
  // 4^(4(|V|+1)) = 2^(8(|V|+1))
  if (num_nonterminals > 6)
    throw Error("theoretical cap c_init + 4^(4(|V|+1)) overflows 64-bit integers; pass an explicit --cap");
  const auto bits = 8 * (num_nonterminals + 1);
  if (bits > 62) throw Error("theoretical cap c_init + 4^(4(|V|+1)) overflows 64-bit integers; pass an explicit --cap");
  const Counter pow = Counter{1} << static_cast<unsigned>(bits);
  if (c_init > std::numeric_limits<Counter>::max() - pow)
    throw Error("theoretical cap overflows 64-bit integers; pass an explicit --cap");
  return c_init + pow;
}

Counter theoretical_cap(const NormalizedGvas& g) { return theoretical_cap(g.num_nonterminals(), g.c_init()); }

namespace {

constexpr Counter kBig = std::numeric_limits<Counter>::max() / 8;

Counter sat_mul(Counter a, Counter b) {
  if (a != 0 && b > kBig / a) return kBig;
  return a * b;
}

Counter pow4(std::size_t e) {
  Counter v = 1;
  for (std::size_t i = 0; i < e; ++i) v = sat_mul(v, 4);
  return v;
}

enum Dir : std::uint8_t { kLeft = 0, kRight = 1 };

struct Edge {
  std::uint32_t to;
  RuleId rule;
  Dir dir;
};

// Down-step graph over (symbol, input). A left step keeps the input, a right
// step moves to the best output of the left sibling.
class DownGraph {
 public:
  explicit DownGraph(const MaxOutTable& mo) : mo_(mo), width_(mo.cap() + 1) {
    const auto& g = mo.grammar();
    const auto n = g.num_nonterminals() * width_;
    start_.assign(n + 1, 0);
    for (NtId w = 0; w < g.num_nonterminals(); ++w) {
      for (Counter c = 0; c < static_cast<Counter>(width_); ++c) {
        const auto u = node(w, c);
        start_[u] = static_cast<std::uint32_t>(edges_.size());
        for (RuleId r : g.rules_of(w)) {
          const auto& rhs = g.rule(r).rhs;
          if (rhs.size() != 2) continue;
          edges_.push_back(Edge{node(rhs[0].nt(), c), r, kLeft});
          const ExtNat m = mo(rhs[0].nt(), c);
          if (m.is_finite()) edges_.push_back(Edge{node(rhs[1].nt(), m.value()), r, kRight});
        }
      }
    }
    start_[n] = static_cast<std::uint32_t>(edges_.size());
  }

  std::uint32_t node(NtId w, Counter c) const { return static_cast<std::uint32_t>(w * width_ + c); }
  NtId sym(std::uint32_t u) const { return static_cast<NtId>(u / width_); }
  Counter val(std::uint32_t u) const { return static_cast<Counter>(u % width_); }
  std::size_t size() const { return start_.size() - 1; }

  struct Range {
    const Edge* b;
    const Edge* e;
    const Edge* begin() const { return b; }
    const Edge* end() const { return e; }
  };
  Range out(std::uint32_t u) const { return {edges_.data() + start_[u], edges_.data() + start_[u + 1]}; }

 private:
  const MaxOutTable& mo_;
  std::size_t width_;
  std::vector<std::uint32_t> start_;
  std::vector<Edge> edges_;
};

// Tarjan's algorithm without recursion. Component ids come out in reverse
// topological order (sinks first).
std::vector<std::uint32_t> strongly_connected(const DownGraph& h, std::uint32_t& count) {
  const auto n = h.size();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(n, 0);
  std::uint32_t next = 0;
  count = 0;
  struct Frame {
    std::uint32_t u;
    const Edge* it;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, h.out(root).begin()});
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.it != h.out(f.u).end()) {
        const auto v = f.it->to;
        ++f.it;
        if (index[v] == kUnset) {
          index[v] = low[v] = next++;
          stack.push_back(v);
          on_stack[v] = 1;
          call.push_back({v, h.out(v).begin()});
        } else if (on_stack[v]) {
          low[f.u] = std::min(low[f.u], index[v]);
        }
        continue;
      }
      const auto u = f.u;
      call.pop_back();
      if (!call.empty()) low[call.back().u] = std::min(low[call.back().u], low[u]);
      if (low[u] == index[u]) {
        while (true) {
          const auto w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
          if (w == u) break;
        }
        ++count;
      }
    }
  }
  return comp;
}

struct Step {
  std::uint32_t from;
  Edge edge;
};

class Search {
 public:
  Search(const NormalizedGvas& g, const SearchOptions& opts)
      : g_(g),
        nv_(g.num_nonterminals()),
        pruning_(opts.pruning),
        mo_(g, table_cap(g, opts)),
        h_(mo_) {
    const Counter c0 = g.c_init();
    bound_in_ = bound_out_ = mo_.cap();
    if (pruning_) {
      const auto v = static_cast<Counter>(nv_);
      bound_in_ = std::min(bound_in_, c0 + sat_mul(7 * v, pow4(nv_ + 1)));
      bound_out_ = std::min(bound_out_, c0 + sat_mul(6 * v, pow4(nv_ + 1)));
    }
    comp_ = strongly_connected(h_, ncomp_);
    cyclic_.assign(ncomp_, 0);
    std::vector<std::uint32_t> comp_size(ncomp_, 0);
    for (std::uint32_t u = 0; u < h_.size(); ++u) {
      ++comp_size[comp_[u]];
      for (const auto& e : h_.out(u))
        if (e.to == u) cyclic_[comp_[u]] = 1;
    }
    for (std::uint32_t c = 0; c < ncomp_; ++c)
      if (comp_size[c] > 1) cyclic_[c] = 1;
  }

  std::optional<Certificate> run() {
    const Counter c0 = g_.c_init();
    if (c0 > mo_.cap()) return std::nullopt;
    const auto root = h_.node(g_.start(), c0);

    // Largest input at which each symbol can sit strictly below the root.
    std::vector<Counter> max_in(nv_, -1);
    {
      const std::size_t limit = pruning_ ? nv_ : std::numeric_limits<std::size_t>::max();
      std::vector<std::size_t> dist(h_.size(), std::numeric_limits<std::size_t>::max());
      std::deque<std::uint32_t> queue;
      for (const auto& e : h_.out(root))
        if (dist[e.to] > 1) {
          dist[e.to] = 1;
          queue.push_back(e.to);
        }
      while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        max_in[h_.sym(u)] = std::max(max_in[h_.sym(u)], h_.val(u));
        if (dist[u] >= limit) continue;
        for (const auto& e : h_.out(u))
          if (dist[e.to] == std::numeric_limits<std::size_t>::max()) {
            dist[e.to] = dist[u] + 1;
            queue.push_back(e.to);
          }
      }
      if (pruning_)
        for (auto& m : max_in) m = std::min(m, bound_in_);
    }

    struct Candidate {
      NtId x;
      Counter c;
      bool at_root;
    };
    std::vector<Candidate> cands;
    if (!pruning_ || c0 <= bound_in_) cands.push_back({g_.start(), c0, true});
    for (NtId x = 0; x < nv_; ++x)
      for (Counter c = 0; c <= max_in[x]; ++c) cands.push_back({x, c, false});

    for (const auto& cd : cands) {
      if (auto tail = increasing_cycle(cd.x, cd.c)) return assemble(cd.x, cd.c, cd.at_root, *tail, std::nullopt);
    }
    for (const auto& cd : cands) {
      const auto tau = h_.node(cd.x, cd.c);
      if (!cyclic_[comp_[tau]]) continue;
      const ExtNat top = mo_(cd.x, cd.c);
      if (top.is_bottom()) continue;
      const Counter dmax = std::min(top.value(), bound_out_);
      for (Counter d = 0; d <= dmax; ++d) {
        if (!shrinking_cycle_exists(tau, d)) continue;
        return assemble(cd.x, cd.c, cd.at_root, shrinking_cycle(tau, d), d);
      }
    }
    return std::nullopt;
  }

 private:
  static Counter table_cap(const NormalizedGvas& g, const SearchOptions& o) {
    if (o.cap < 0) throw Error("cap must be a natural number");
    if (!o.pruning) return o.cap;
    return std::min(o.cap, g.c_init() + pow4(2 * (g.num_nonterminals() + 1)));
  }

  std::size_t tail_limit() const { return pruning_ ? nv_ + 1 : std::numeric_limits<std::size_t>::max(); }

  // best[x][u]: largest input of an x-node reachable from u (-1 if none).
  const std::vector<Counter>& reach_best(NtId x) {
    auto& slot = best_[x];
    if (!slot.empty()) return slot;
    const auto n = h_.size();
    auto own = [&](std::uint32_t u) {
      return (h_.sym(u) == x && h_.val(u) <= bound_in_) ? h_.val(u) : Counter{-1};
    };
    if (!pruning_) {
      std::vector<Counter> by_comp(ncomp_, -1);
      std::vector<std::vector<std::uint32_t>> members(ncomp_);
      for (std::uint32_t u = 0; u < n; ++u) members[comp_[u]].push_back(u);
      for (std::uint32_t c = 0; c < ncomp_; ++c) {
        Counter b = -1;
        for (auto u : members[c]) {
          b = std::max(b, own(u));
          for (const auto& e : h_.out(u))
            if (comp_[e.to] != c) b = std::max(b, by_comp[comp_[e.to]]);
        }
        by_comp[c] = b;
      }
      slot.resize(n);
      for (std::uint32_t u = 0; u < n; ++u) slot[u] = by_comp[comp_[u]];
    } else {
      std::vector<Counter> layer(n);
      for (std::uint32_t u = 0; u < n; ++u) layer[u] = own(u);
      for (std::size_t k = 0; k < nv_; ++k) {
        std::vector<Counter> next(n);
        for (std::uint32_t u = 0; u < n; ++u) {
          Counter b = own(u);
          for (const auto& e : h_.out(u)) b = std::max(b, layer[e.to]);
          next[u] = b;
        }
        layer = std::move(next);
      }
      slot = std::move(layer);
    }
    return slot;
  }

  // Nonempty path from (x, c) to an x-node with larger input.
  std::optional<std::vector<Step>> increasing_cycle(NtId x, Counter c) {
    const auto& best = reach_best(x);
    const auto from = h_.node(x, c);
    bool ok = false;
    for (const auto& e : h_.out(from))
      if (best[e.to] > c) ok = true;
    if (!ok) return std::nullopt;
    auto path = bfs_path(from, [&](std::uint32_t u) { return h_.sym(u) == x && h_.val(u) > c && h_.val(u) <= bound_in_; });
    if (!path) throw Error("certificate search: increasing cycle vanished during reconstruction");
    return path;
  }

  template <class Pred>
  std::optional<std::vector<Step>> bfs_path(std::uint32_t from, Pred target) const {
    const auto limit = tail_limit();
    std::unordered_map<std::uint32_t, Step> parent;
    std::unordered_map<std::uint32_t, std::size_t> dist;
    std::deque<std::uint32_t> queue;
    auto finish = [&](std::uint32_t v) {
      std::vector<Step> steps;
      for (std::size_t n = dist.at(v); n > 0; --n) {
        const auto& p = parent.at(v);
        steps.push_back(p);
        v = p.from;
      }
      std::reverse(steps.begin(), steps.end());
      return steps;
    };
    for (const auto& e : h_.out(from)) {
      if (dist.contains(e.to) || e.to == from) continue;
      dist[e.to] = 1;
      parent[e.to] = Step{from, e};
      if (target(e.to)) return finish(e.to);
      queue.push_back(e.to);
    }
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      if (dist[u] >= limit) continue;
      for (const auto& e : h_.out(u)) {
        if (dist.contains(e.to) || e.to == from) continue;
        dist[e.to] = dist[u] + 1;
        parent[e.to] = Step{u, e};
        if (target(e.to)) return finish(e.to);
        queue.push_back(e.to);
      }
    }
    return std::nullopt;
  }

  // Requirement propagation: "output at the current node must be >= b".
  std::optional<Counter> push_requirement(const Edge& e, Counter b) const {
    if (e.dir == kRight) return b;
    const auto& rhs = g_.grammar().rule(e.rule).rhs;
    return mo_.min_input(rhs[1].nt(), b);
  }

  bool shrinking_cycle_exists(std::uint32_t tau, Counter d) const {
    const auto comp = comp_[tau];
    if (pruning_) {
      std::unordered_map<std::uint32_t, Counter> layer{{tau, d + 1}};
      for (std::size_t k = 0; k < nv_ + 1 && !layer.empty(); ++k) {
        std::unordered_map<std::uint32_t, Counter> next;
        for (const auto& [u, b] : layer) {
          if (u == tau && k > 0) continue;
          for (const auto& e : h_.out(u)) {
            if (comp_[e.to] != comp) continue;
            const auto nb = push_requirement(e, b);
            if (!nb) continue;
            if (e.to == tau && *nb <= d) return true;
            auto [it, fresh] = next.emplace(e.to, *nb);
            if (!fresh) it->second = std::min(it->second, *nb);
          }
        }
        layer = std::move(next);
      }
      return false;
    }
    std::unordered_map<std::uint32_t, Counter> req;
    std::deque<std::uint32_t> work;
    auto relax = [&](std::uint32_t v, Counter b) {
      auto it = req.find(v);
      if (it != req.end() && it->second <= b) return;
      req[v] = b;
      work.push_back(v);
    };
    for (const auto& e : h_.out(tau)) {
      if (comp_[e.to] != comp) continue;
      const auto nb = push_requirement(e, d + 1);
      if (!nb) continue;
      if (e.to == tau) {
        if (*nb <= d) return true;
        continue;
      }
      relax(e.to, *nb);
    }
    while (!work.empty()) {
      const auto u = work.front();
      work.pop_front();
      const Counter b = req.at(u);
      for (const auto& e : h_.out(u)) {
        if (comp_[e.to] != comp) continue;
        const auto nb = push_requirement(e, b);
        if (!nb) continue;
        if (e.to == tau) {
          if (*nb <= d) return true;
          continue;
        }
        relax(e.to, *nb);
      }
    }
    return false;
  }

  std::vector<Step> shrinking_cycle(std::uint32_t tau, Counter d) const {
    const auto comp = comp_[tau];
    const auto width = static_cast<std::uint64_t>(mo_.cap()) + 2;
    auto key = [&](std::uint32_t u, Counter b) { return u * width + static_cast<std::uint64_t>(b); };
    struct Prev {
      std::uint64_t from;
      Step step;
      std::size_t depth;
    };
    std::unordered_map<std::uint64_t, Prev> seen;
    std::deque<std::pair<std::uint32_t, Counter>> queue{{tau, d + 1}};
    const auto start_key = key(tau, d + 1);
    seen.emplace(start_key, Prev{start_key, {}, 0});
    const auto limit = tail_limit();
    while (!queue.empty()) {
      const auto [u, b] = queue.front();
      queue.pop_front();
      const auto depth = seen.at(key(u, b)).depth;
      if (depth >= limit) continue;
      for (const auto& e : h_.out(u)) {
        if (comp_[e.to] != comp) continue;
        const auto nb = push_requirement(e, b);
        if (!nb) continue;
        if (e.to == tau && *nb <= d) {
          std::vector<Step> steps{Step{u, e}};
          for (auto k = key(u, b); k != start_key;) {
            const auto& p = seen.at(k);
            steps.push_back(p.step);
            k = p.from;
          }
          std::reverse(steps.begin(), steps.end());
          return steps;
        }
        if (e.to == tau) continue;
        const auto k = key(e.to, *nb);
        if (seen.contains(k)) continue;
        seen.emplace(k, Prev{key(u, b), Step{u, e}, depth + 1});
        queue.emplace_back(e.to, *nb);
      }
    }
    throw Error("certificate search: shrinking cycle vanished during reconstruction");
  }

  // Root-to-s path, s-to-t path, then the flow tree around them.
  Certificate assemble(NtId x, Counter cs, bool at_root, const std::vector<Step>& tail,
                       std::optional<Counter> d) {
    std::vector<Step> head;
    if (!at_root) {
      const auto root = h_.node(g_.start(), g_.c_init());
      auto p = bfs_head(root, x, cs, pruning_ ? nv_ : std::numeric_limits<std::size_t>::max());
      if (!p) throw Error("certificate search: admissible node vanished during reconstruction");
      head = std::move(*p);
    }
    const auto& gr = g_.grammar();

    // Inputs along the combined path.
    std::vector<Step> steps = head;
    steps.insert(steps.end(), tail.begin(), tail.end());
    const std::size_t k = head.size();
    const std::size_t m = steps.size();
    std::vector<NtId> sym(m + 1);
    std::vector<Counter> in(m + 1);
    sym[0] = g_.start();
    in[0] = g_.c_init();
    for (std::size_t i = 0; i < m; ++i) {
      const auto& rhs = gr.rule(steps[i].edge.rule).rhs;
      if (i == k) in[i] = cs;
      if (steps[i].edge.dir == kLeft) {
        sym[i + 1] = rhs[0].nt();
        in[i + 1] = in[i];
      } else {
        sym[i + 1] = rhs[1].nt();
        in[i + 1] = mo_(rhs[0].nt(), in[i]).value();
      }
    }
    if (k == m) throw Error("certificate search: empty s-to-t path");

    FlowNode acc = d ? mo_.materialize(x, in[m], *d) : mo_.bottom_tree(x, in[m]);
    for (std::size_t i = m; i-- > 0;) {
      const auto& rhs = gr.rule(steps[i].edge.rule).rhs;
      const bool inside = i >= k;
      FlowNode node{Symbol::nonterminal(sym[i]), in[i], ExtNat::bottom(), {}};
      if (steps[i].edge.dir == kLeft) {
        const NtId z = rhs[1].nt();
        FlowNode sib = mo_.bottom_tree(z, ExtNat::bottom());
        if (inside && d && acc.out.is_finite()) {
          const ExtNat zout = mo_(z, acc.out);
          sib = mo_.materialize(z, acc.out.value(), zout);
          node.out = zout;
        }
        node.children.push_back(std::move(acc));
        node.children.push_back(std::move(sib));
      } else {
        FlowNode sib = mo_.materialize(rhs[0].nt(), in[i], acc.in);
        if (inside && d) node.out = acc.out;
        node.children.push_back(std::move(sib));
        node.children.push_back(std::move(acc));
      }
      acc = std::move(node);
    }

    Certificate cert;
    cert.flow = std::move(acc);
    for (std::size_t i = 0; i < m; ++i) {
      (i < k ? cert.s : cert.t).push_back(steps[i].edge.dir == kLeft ? 0 : 1);
    }
    cert.t.insert(cert.t.begin(), cert.s.begin(), cert.s.end());
    return cert;
  }

  std::optional<std::vector<Step>> bfs_head(std::uint32_t root, NtId x, Counter cs, std::size_t limit) const {
    std::unordered_map<std::uint32_t, Step> parent;
    std::unordered_map<std::uint32_t, std::size_t> dist;
    std::deque<std::uint32_t> queue;
    auto finish = [&](std::uint32_t v) {
      std::vector<Step> steps;
      for (std::size_t n = dist.at(v); n > 0; --n) {
        const auto& p = parent.at(v);
        steps.push_back(p);
        v = p.from;
      }
      std::reverse(steps.begin(), steps.end());
      return steps;
    };
    auto hit = [&](std::uint32_t u) { return h_.sym(u) == x && h_.val(u) >= cs; };
    for (const auto& e : h_.out(root)) {
      if (dist.contains(e.to)) continue;
      dist[e.to] = 1;
      parent[e.to] = Step{root, e};
      if (hit(e.to)) return finish(e.to);
      queue.push_back(e.to);
    }
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      if (dist[u] >= limit) continue;
      for (const auto& e : h_.out(u)) {
        if (dist.contains(e.to)) continue;
        dist[e.to] = dist[u] + 1;
        parent[e.to] = Step{u, e};
        if (hit(e.to)) return finish(e.to);
        queue.push_back(e.to);
      }
    }
    return std::nullopt;
  }

  const NormalizedGvas& g_;
  std::size_t nv_;
  bool pruning_;
  MaxOutTable mo_;
  DownGraph h_;
  Counter bound_in_ = 0;
  Counter bound_out_ = 0;
  std::vector<std::uint32_t> comp_;
  std::uint32_t ncomp_ = 0;
  std::vector<char> cyclic_;
  std::unordered_map<NtId, std::vector<Counter>> best_;
};

}  // namespace

std::optional<Certificate> find_certificate(const NormalizedGvas& g, const SearchOptions& opts) {
  Search s(g, opts);
  return s.run();
}

}  // namespace cbound
