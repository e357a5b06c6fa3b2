#include "cbound/brute_force.hpp"

#include <array>

#include "cbound/error.hpp"

namespace cbound {

namespace {

// Annotations are ints in [-1, M]; -1 stands for -inf. Plain integer
// comparison then matches the order on N u {-inf}, strictness included.
constexpr int kBot = -1;

ExtNat ext(int v) { return v == kBot ? ExtNat::bottom() : ExtNat(v); }

bool leaf_ok(int out, int in, std::int64_t delta) {
  if (out == kBot) return true;
  if (in == kBot) return false;
  return out <= in + delta;
}

struct Real {
  bool ok = false;
  RuleId rule = 0;
  int a_in = kBot, a_out = kBot, b_in = kBot, b_out = kBot;
};

class Brute {
 public:
  Brute(const NormalizedGvas& g, int height, int max_value)
      : g_(g.grammar()), start_(g.start()), c0_(g.c_init()), H_(height), M_(max_value), D_(max_value + 2),
        V_(static_cast<int>(g.num_nonterminals())) {
    real_.resize(static_cast<std::size_t>((H_ + 1) * V_ * D_ * D_));
    ex_.assign(real_.size(), {kBot - 1, kBot - 1});
    for (int h = 1; h <= H_; ++h) fill_level(h);
    const auto n = static_cast<std::size_t>(H_ * V_ * D_ * D_);
    words_ = (static_cast<std::size_t>(V_ * D_ * D_) + 63) / 64;
    desc_.resize(n);
    kids_.resize(n);
    top_.assign(n, -1);
  }

  std::optional<Certificate> run() {
    if (c0_ > M_) return std::nullopt;
    for (int o = kBot; o <= M_; ++o) {
      if (!top(0, static_cast<int>(start_), static_cast<int>(c0_), o)) continue;
      Certificate cert;
      NodePath path;
      cert.flow = rebuild_top(0, static_cast<int>(start_), static_cast<int>(c0_), o, path, cert);
      return cert;
    }
    return std::nullopt;
  }

 private:
  using Bits = std::vector<std::uint64_t>;

  std::size_t at(int h, int y, int i, int o) const {
    return static_cast<std::size_t>(((h * V_ + y) * D_ + (i + 1)) * D_ + (o + 1));
  }
  std::size_t bit(int x, int i, int o) const { return static_cast<std::size_t>((x * D_ + (i + 1)) * D_ + (o + 1)); }

  void fill_level(int h) {
    for (int y = 0; y < V_; ++y) {
      for (int i = kBot; i <= M_; ++i)
        for (int o = kBot; o <= M_; ++o) real_[at(h, y, i, o)] = real_[at(h - 1, y, i, o)];
      for (RuleId r : g_.rules_of(static_cast<NtId>(y))) {
        const auto& rhs = g_.rule(r).rhs;
        if (rhs.size() < 2) {
          // Node (i, o) over a single leaf (ci, co).
          for (int i = kBot; i <= M_; ++i)
            for (int o = kBot; o <= M_; ++o) {
              auto& slot = real_[at(h, y, i, o)];
              for (int ci = kBot; ci <= i && !slot.ok; ++ci)
                for (int co = o; co <= M_ && !slot.ok; ++co) {
                  const bool good = rhs.empty() ? co <= ci : leaf_ok(co, ci, rhs[0].value);
                  if (good) slot = Real{true, r, ci, co, kBot, kBot};
                }
            }
          continue;
        }
        if (h < 2) continue;
        const int a = static_cast<int>(rhs[0].nt());
        const int b = static_cast<int>(rhs[1].nt());
        // combo[i1][o2]: children (i1, o1) and (i2, o2) with i2 <= o1.
        std::vector<std::array<int, 2>> combo(static_cast<std::size_t>(D_ * D_), {kBot - 1, kBot - 1});
        for (int i1 = kBot; i1 <= M_; ++i1)
          for (int o1 = kBot; o1 <= M_; ++o1) {
            if (!real_[at(h - 1, a, i1, o1)].ok) continue;
            for (int i2 = kBot; i2 <= o1; ++i2)
              for (int o2 = kBot; o2 <= M_; ++o2) {
                if (!real_[at(h - 1, b, i2, o2)].ok) continue;
                auto& c = combo[static_cast<std::size_t>((i1 + 1) * D_ + (o2 + 1))];
                if (c[0] < kBot) c = {o1, i2};
              }
          }
        for (int i = kBot; i <= M_; ++i)
          for (int o = kBot; o <= M_; ++o) {
            auto& slot = real_[at(h, y, i, o)];
            for (int i1 = kBot; i1 <= i && !slot.ok; ++i1)
              for (int o2 = o; o2 <= M_ && !slot.ok; ++o2) {
                const auto& c = combo[static_cast<std::size_t>((i1 + 1) * D_ + (o2 + 1))];
                if (c[0] >= kBot) slot = Real{true, r, i1, c[0], c[1], o2};
              }
          }
      }
      // ex: some realizable (i', o') with i' <= i and o' >= o.
      for (int i = kBot; i <= M_; ++i)
        for (int o = kBot; o <= M_; ++o) {
          auto& e = ex_[at(h, y, i, o)];
          for (int ii = kBot; ii <= i && e[0] < kBot; ++ii)
            for (int oo = o; oo <= M_ && e[0] < kBot; ++oo)
              if (real_[at(h, y, ii, oo)].ok) e = {ii, oo};
        }
    }
  }

  bool has_ex(int h, int y, int i, int o) const { return ex_[at(h, y, i, o)][0] >= kBot; }

  // Realizations of (x, it, ot) for t at or below a node (w, i, o) at `depth`.
  const Bits& desc(int depth, int w, int i, int o) {
    auto& slot = desc_[at(depth, w, i, o)];
    if (!slot.empty()) return slot;
    Bits bits = kids(depth, w, i, o);
    if (real_[at(H_ - depth, w, i, o)].ok) {
      const auto k = bit(w, i, o);
      bits[k / 64] |= std::uint64_t{1} << (k % 64);
    }
    desc_[at(depth, w, i, o)] = std::move(bits);
    return desc_[at(depth, w, i, o)];
  }

  const Bits& kids(int depth, int w, int i, int o) {
    auto& slot = kids_[at(depth, w, i, o)];
    if (!slot.empty()) return slot;
    Bits bits(words_, 0);
    const int rem = H_ - depth - 1;
    if (rem >= 1) {
      for_each_step(depth, w, i, o, [&](int child, int ci, int co) {
        const auto& sub = desc(depth + 1, child, ci, co);
        for (std::size_t k = 0; k < words_; ++k) bits[k] |= sub[k];
        return false;
      });
    }
    kids_[at(depth, w, i, o)] = std::move(bits);
    return kids_[at(depth, w, i, o)];
  }

  // Calls f(child, ci, co) for every path child annotation compatible with
  // a realizable sibling; stops when f returns true.
  template <class F>
  bool for_each_step(int depth, int w, int i, int o, F&& f) {
    const int rem = H_ - depth - 1;
    if (rem < 1) return false;
    for (RuleId r : g_.rules_of(static_cast<NtId>(w))) {
      const auto& rhs = g_.rule(r).rhs;
      if (rhs.size() != 2) continue;
      const int a = static_cast<int>(rhs[0].nt());
      const int b = static_cast<int>(rhs[1].nt());
      for (int ci = kBot; ci <= i; ++ci)
        for (int co = kBot; co <= M_; ++co)
          if (has_ex(rem, b, co, o) && f(a, ci, co)) return true;
      for (int ci = kBot; ci <= M_; ++ci)
        for (int co = o; co <= M_; ++co)
          if (has_ex(rem, a, i, ci) && f(b, ci, co)) return true;
    }
    return false;
  }

  std::optional<std::pair<int, int>> pick_t(int w, int i, int o, const Bits& bits) const {
    for (int it = kBot; it <= M_; ++it)
      for (int ot = kBot; ot <= M_; ++ot) {
        const auto k = bit(w, it, ot);
        if (!((bits[k / 64] >> (k % 64)) & 1)) continue;
        if (it >= i && (i < it || ot < o)) return std::pair{it, ot};
      }
    return std::nullopt;
  }

  bool top(int depth, int w, int i, int o) {
    auto& memo = top_[at(depth, w, i, o)];
    if (memo >= 0) return memo == 1;
    bool found = pick_t(w, i, o, kids(depth, w, i, o)).has_value();
    if (!found)
      found = for_each_step(depth, w, i, o, [&](int child, int ci, int co) { return top(depth + 1, child, ci, co); });
    top_[at(depth, w, i, o)] = found ? 1 : 0;
    return found;
  }

  FlowNode real_tree(int h, int y, int i, int o) const {
    const auto& r = real_[at(h, y, i, o)];
    if (!r.ok) throw Error("brute force: missing realization");
    FlowNode n{Symbol::nonterminal(static_cast<NtId>(y)), ext(i), ext(o), {}};
    const auto& rhs = g_.rule(r.rule).rhs;
    if (rhs.empty()) {
      n.children.push_back(FlowNode{Symbol::epsilon(), ext(r.a_in), ext(r.a_out), {}});
    } else if (rhs.size() == 1) {
      n.children.push_back(FlowNode{rhs[0], ext(r.a_in), ext(r.a_out), {}});
    } else {
      n.children.push_back(real_tree(h - 1, static_cast<int>(rhs[0].nt()), r.a_in, r.a_out));
      n.children.push_back(real_tree(h - 1, static_cast<int>(rhs[1].nt()), r.b_in, r.b_out));
    }
    return n;
  }

  // Node (w, i, o) with the path continuing into the first child annotation
  // accepted by `want`; `descend` builds that child.
  template <class Want, class Descend>
  FlowNode step_node(int depth, int w, int i, int o, NodePath& path, Want&& want, Descend&& descend) {
    const int rem = H_ - depth - 1;
    for (RuleId r : g_.rules_of(static_cast<NtId>(w))) {
      const auto& rhs = g_.rule(r).rhs;
      if (rhs.size() != 2) continue;
      const int a = static_cast<int>(rhs[0].nt());
      const int b = static_cast<int>(rhs[1].nt());
      for (int ci = kBot; ci <= i; ++ci)
        for (int co = kBot; co <= M_; ++co) {
          if (!has_ex(rem, b, co, o) || !want(a, ci, co)) continue;
          const auto e = ex_[at(rem, b, co, o)];
          FlowNode n{Symbol::nonterminal(static_cast<NtId>(w)), ext(i), ext(o), {}};
          path.push_back(0);
          n.children.push_back(descend(a, ci, co));
          path.pop_back();
          n.children.push_back(real_tree(rem, b, e[0], e[1]));
          return n;
        }
      for (int ci = kBot; ci <= M_; ++ci)
        for (int co = o; co <= M_; ++co) {
          if (!has_ex(rem, a, i, ci) || !want(b, ci, co)) continue;
          const auto e = ex_[at(rem, a, i, ci)];
          FlowNode n{Symbol::nonterminal(static_cast<NtId>(w)), ext(i), ext(o), {}};
          n.children.push_back(real_tree(rem, a, e[0], e[1]));
          path.push_back(1);
          n.children.push_back(descend(b, ci, co));
          path.pop_back();
          return n;
        }
    }
    throw Error("brute force: reconstruction lost its witness");
  }

  FlowNode rebuild_desc(int depth, int w, int i, int o, int tx, int ti, int to, NodePath& path, Certificate& cert) {
    if (w == tx && i == ti && o == to && real_[at(H_ - depth, w, i, o)].ok) {
      cert.t = path;
      return real_tree(H_ - depth, w, i, o);
    }
    return rebuild_kids(depth, w, i, o, tx, ti, to, path, cert);
  }

  FlowNode rebuild_kids(int depth, int w, int i, int o, int tx, int ti, int to, NodePath& path, Certificate& cert) {
    const auto k = bit(tx, ti, to);
    return step_node(
        depth, w, i, o, path,
        [&](int child, int ci, int co) {
          const auto& d = desc(depth + 1, child, ci, co);
          return ((d[k / 64] >> (k % 64)) & 1) != 0;
        },
        [&](int child, int ci, int co) { return rebuild_desc(depth + 1, child, ci, co, tx, ti, to, path, cert); });
  }

  FlowNode rebuild_top(int depth, int w, int i, int o, NodePath& path, Certificate& cert) {
    if (auto t = pick_t(w, i, o, kids(depth, w, i, o))) {
      cert.s = path;
      return rebuild_kids(depth, w, i, o, w, t->first, t->second, path, cert);
    }
    return step_node(
        depth, w, i, o, path, [&](int child, int ci, int co) { return top(depth + 1, child, ci, co); },
        [&](int child, int ci, int co) { return rebuild_top(depth + 1, child, ci, co, path, cert); });
  }

  const Grammar& g_;
  NtId start_;
  Counter c0_;
  int H_, M_, D_, V_;
  std::vector<Real> real_;
  std::vector<std::array<int, 2>> ex_;
  std::size_t words_ = 0;
  std::vector<Bits> desc_, kids_;
  std::vector<signed char> top_;
};

}  // namespace

std::optional<Certificate> brute_force_certificate(const NormalizedGvas& g, std::size_t max_height,
                                                   Counter max_value) {
  if (g.num_nonterminals() > 3) throw Error("brute force refuses grammars with more than 3 nonterminals");
  if (max_height > 8 || max_value > 8 || max_value < 0)
    throw Error("brute force bounds must satisfy height <= 8 and 0 <= value <= 8");
  if (max_height < 2) return std::nullopt;
  Brute b(g, static_cast<int>(max_height), static_cast<int>(max_value));
  return b.run();
}

}  // namespace cbound
