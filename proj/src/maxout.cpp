#include "cbound/maxout.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cbound/error.hpp"

namespace cbound {

MaxOutTable::MaxOutTable(const NormalizedGvas& g, Counter cap) : g_(g.grammar()), cap_(cap) {
  if (cap < 0) throw Error("cap must be a natural number");
  const auto nv = g_.num_nonterminals();
  hist_.resize(nv * static_cast<std::size_t>(cap + 1));

  std::vector<std::vector<NtId>> users(nv);
  for (const auto& r : g_.rules())
    for (const auto& s : r.rhs)
      if (s.is_nonterminal()) users[s.nt()].push_back(r.lhs);
  for (auto& u : users) {
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
  }

  // Every history entry is computed from values recorded under smaller
  // stamps; materialize() relies on that to terminate.
  std::uint64_t stamp = 0;
  std::deque<NtId> queue;
  std::vector<char> queued(nv, 1);
  for (NtId x = 0; x < nv; ++x) queue.push_back(x);
  while (!queue.empty()) {
    const NtId x = queue.front();
    queue.pop_front();
    queued[x] = 0;
    bool changed = false;
    for (Counter c = 0; c <= cap_; ++c) {
      for (RuleId r : g_.rules_of(x)) {
        const auto& rhs = g_.rule(r).rhs;
        Counter cand = -1;
        Counter mid = -1;
        if (rhs.empty()) {
          cand = c;
        } else if (rhs.size() == 1) {
          const Counter v = c + rhs[0].value;
          cand = v < 0 ? -1 : std::min(v, cap_);
        } else {
          mid = current(rhs[0].nt(), c);
          if (mid >= 0) cand = current(rhs[1].nt(), mid);
        }
        if (cand > current(x, c)) {
          hist_[key(x, c)].push_back(Hist{cand, ++stamp, r, mid});
          changed = true;
        }
      }
    }
    if (!changed) continue;
    for (NtId u : users[x])
      if (!queued[u]) {
        queued[u] = 1;
        queue.push_back(u);
      }
  }

  // Smallest complete tree per symbol, for -inf completions.
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> size(nv, kInf);
  smallest_rule_.assign(nv, 0);
  for (bool again = true; again;) {
    again = false;
    for (const auto& r : g_.rules()) {
      std::size_t s = 1;
      if (r.rhs.size() < 2) {
        s = 2;
      } else {
        for (const auto& sym : r.rhs) {
          if (size[sym.nt()] == kInf) {
            s = kInf;
            break;
          }
          s += size[sym.nt()];
        }
      }
      if (s < size[r.lhs]) {
        size[r.lhs] = s;
        smallest_rule_[r.lhs] = static_cast<RuleId>(&r - g_.rules().data());
        again = true;
      }
    }
  }
}

Counter MaxOutTable::current(NtId x, Counter c) const {
  const auto& h = hist_[key(x, c)];
  return h.empty() ? -1 : h.back().value;
}

ExtNat MaxOutTable::operator()(NtId x, ExtNat c) const {
  if (c.is_bottom()) return ExtNat::bottom();
  const Counter v = current(x, std::min(c.value(), cap_));
  return v < 0 ? ExtNat::bottom() : ExtNat(v);
}

ExtNat MaxOutTable::apply(const Symbol& s, ExtNat c) const {
  if (c.is_bottom()) return c;
  switch (s.kind) {
    case Symbol::Kind::Epsilon: return c;
    case Symbol::Kind::Action: {
      const Counter v = c.value() + s.value;
      return v < 0 ? ExtNat::bottom() : ExtNat(std::min(v, cap_));
    }
    case Symbol::Kind::Nonterminal: break;
  }
  return (*this)(s.nt(), c);
}

std::optional<Counter> MaxOutTable::min_input(NtId z, Counter need) const {
  // MO(z, .) is monotone, so binary search the first qualifying input.
  if (current(z, cap_) < need) return std::nullopt;
  Counter lo = 0, hi = cap_;
  while (lo < hi) {
    const Counter mid = lo + (hi - lo) / 2;
    if (current(z, mid) >= need) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

FlowNode MaxOutTable::materialize(NtId x, Counter c, ExtNat d) const {
  if (d.is_bottom()) return bottom_tree(x, c);
  const auto& h = hist_.at(key(x, c));
  const auto it = std::find_if(h.begin(), h.end(), [&](const Hist& e) { return e.value >= d.value(); });
  if (it == h.end()) throw Error("materialize: requested output exceeds the table entry");
  const auto& rhs = g_.rule(it->rule).rhs;
  FlowNode node{Symbol::nonterminal(x), c, d, {}};
  if (rhs.empty()) {
    node.children.push_back(FlowNode{Symbol::epsilon(), c, d, {}});
  } else if (rhs.size() == 1) {
    node.children.push_back(FlowNode{rhs[0], c, d, {}});
  } else {
    node.children.push_back(materialize(rhs[0].nt(), c, it->mid));
    node.children.push_back(materialize(rhs[1].nt(), it->mid, d));
  }
  return node;
}

FlowNode MaxOutTable::bottom_below(const Symbol& s) const {
  FlowNode n{s, ExtNat::bottom(), ExtNat::bottom(), {}};
  if (!s.is_nonterminal()) return n;
  const auto& rhs = g_.rule(smallest_rule_[s.nt()]).rhs;
  if (rhs.empty()) n.children.push_back(FlowNode{Symbol::epsilon(), ExtNat::bottom(), ExtNat::bottom(), {}});
  for (const auto& c : rhs) n.children.push_back(bottom_below(c));
  return n;
}

FlowNode MaxOutTable::bottom_tree(NtId x, ExtNat in) const {
  FlowNode n = bottom_below(Symbol::nonterminal(x));
  n.in = in;
  return n;
}

}  // namespace cbound
