#include "cbound/normalize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cbound/error.hpp"

namespace cbound {

namespace {

int bit_length(std::uint64_t v) {
  int n = 0;
  while (v) {
    ++n;
    v >>= 1;
  }
  return n;
}

// Copies nonterminal names so ids coincide with the source grammar.
Gvas copy_names(const Gvas& g) {
  Gvas out;
  out.c_init = g.c_init;
  for (NtId x = 0; x < g.grammar.num_nonterminals(); ++x) out.grammar.intern(g.grammar.name(x));
  out.grammar.set_start(g.grammar.start());
  return out;
}

}  // namespace

Gvas expand_actions(const Gvas& g) {
  std::uint64_t max_pos = 0;
  std::uint64_t max_neg = 0;
  for (auto a : g.grammar.actions()) {
    if (a > 1) max_pos = std::max<std::uint64_t>(max_pos, static_cast<std::uint64_t>(a));
    if (a < -1) max_neg = std::max<std::uint64_t>(max_neg, static_cast<std::uint64_t>(-(a + 1)) + 1);
  }
  if (max_pos == 0 && max_neg == 0) return g;

  Gvas out = copy_names(g);
  auto& gr = out.grammar;

  // doubling[m-1] derives sign^(2^(m-1))
  auto make_doubling = [&](std::uint64_t max_abs, std::int64_t sign, std::string_view stem) {
    std::vector<NtId> chain;
    const int n = bit_length(max_abs);
    for (int m = 1; m <= n; ++m) {
      const NtId b = gr.intern(gr.fresh_name(stem));
      if (m == 1) {
        gr.add_rule(b, {Symbol::action(sign)});
      } else {
        gr.add_rule(b, {Symbol::nonterminal(chain.back()), Symbol::nonterminal(chain.back())});
      }
      chain.push_back(b);
    }
    return chain;
  };
  const auto pos_chain = make_doubling(max_pos, 1, "P");
  const auto neg_chain = make_doubling(max_neg, -1, "M");

  std::map<std::int64_t, NtId> wrappers;
  auto wrapper = [&](std::int64_t a) {
    if (auto it = wrappers.find(a); it != wrappers.end()) return it->second;
    const NtId x = gr.intern(gr.fresh_name("A" + std::to_string(a) + "_"));
    const auto& chain = a > 0 ? pos_chain : neg_chain;
    const std::uint64_t mag = a > 0 ? static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(-(a + 1)) + 1;
    std::vector<Symbol> rhs;
    for (int m = bit_length(mag); m >= 1; --m)
      if ((mag >> (m - 1)) & 1U) rhs.push_back(Symbol::nonterminal(chain[m - 1]));
    gr.add_rule(x, std::move(rhs));
    wrappers.emplace(a, x);
    return x;
  };

  // Original rules first so rule indices of the input are preserved.
  std::vector<std::vector<Symbol>> rewritten;
  for (const auto& r : g.grammar.rules()) {
    std::vector<Symbol> rhs;
    for (const auto& s : r.rhs) {
      if (s.is_action() && (s.value > 1 || s.value < -1)) {
        rhs.push_back(Symbol::nonterminal(wrapper(s.value)));
      } else {
        rhs.push_back(s);
      }
    }
    rewritten.push_back(std::move(rhs));
  }
  Gvas ordered = copy_names(g);
  for (NtId x = static_cast<NtId>(g.grammar.num_nonterminals()); x < gr.num_nonterminals(); ++x)
    ordered.grammar.intern(gr.name(x));
  for (std::size_t i = 0; i < rewritten.size(); ++i)
    ordered.grammar.add_rule(g.grammar.rules()[i].lhs, std::move(rewritten[i]));
  for (const auto& r : gr.rules()) ordered.grammar.add_rule(r.lhs, r.rhs);
  return ordered;
}

NormalizedGvas to_weak_cnf(const Gvas& g) {
  for (auto a : g.grammar.actions())
    if (a < -1 || a > 1) throw Error("to_weak_cnf requires actions in {-1, 0, 1}; run expand_actions first");

  Gvas work = copy_names(g);
  auto& gr = work.grammar;

  // Terminals inside long right-hand sides become @T nonterminals.
  std::map<std::int64_t, NtId> terminal_nt;
  auto terminal = [&](std::int64_t a) {
    if (auto it = terminal_nt.find(a); it != terminal_nt.end()) return it->second;
    const NtId x = gr.intern(gr.fresh_name(a < 0 ? "Tm" : "T"));
    terminal_nt.emplace(a, x);
    return x;
  };

  struct Pending {
    NtId lhs;
    std::vector<Symbol> rhs;
  };
  std::vector<Pending> rules;
  for (const auto& r : g.grammar.rules()) {
    std::vector<Symbol> rhs = r.rhs;
    if (rhs.size() >= 2)
      for (auto& s : rhs)
        if (s.is_action()) s = Symbol::nonterminal(terminal(s.value));
    rules.push_back({r.lhs, std::move(rhs)});
  }
  for (auto [a, x] : terminal_nt) rules.push_back({x, {Symbol::action(a)}});

  // Binarize right-nested: X -> A B C becomes X -> A @C1, @C1 -> B C.
  std::vector<Pending> binary;
  for (auto& p : rules) {
    NtId lhs = p.lhs;
    std::size_t i = 0;
    while (p.rhs.size() - i > 2) {
      const NtId chain = gr.intern(gr.fresh_name("C"));
      binary.push_back({lhs, {p.rhs[i], Symbol::nonterminal(chain)}});
      lhs = chain;
      ++i;
    }
    binary.push_back({lhs, std::vector<Symbol>(p.rhs.begin() + static_cast<std::ptrdiff_t>(i), p.rhs.end())});
  }

  // Unit rules: X inherits every non-unit rule of each Y with X =>unit* Y.
  const std::size_t n = gr.num_nonterminals();
  std::vector<std::vector<bool>> unit(n, std::vector<bool>(n, false));
  for (NtId x = 0; x < n; ++x) unit[x][x] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : binary) {
      if (p.rhs.size() != 1 || !p.rhs[0].is_nonterminal()) continue;
      const NtId y = p.rhs[0].nt();
      for (NtId x = 0; x < n; ++x)
        if (unit[x][p.lhs] && !unit[x][y]) {
          for (NtId z = 0; z < n; ++z)
            if (unit[y][z]) unit[x][z] = true;
          unit[x][y] = true;
          changed = true;
        }
    }
  }
  std::vector<std::vector<const Pending*>> non_unit_of(n);
  for (const auto& p : binary)
    if (!(p.rhs.size() == 1 && p.rhs[0].is_nonterminal())) non_unit_of[p.lhs].push_back(&p);

  Gvas result = copy_names(g);
  for (NtId x = static_cast<NtId>(g.grammar.num_nonterminals()); x < n; ++x) result.grammar.intern(gr.name(x));
  std::set<std::pair<NtId, std::vector<Symbol>>> emitted;
  auto emit = [&](NtId lhs, const std::vector<Symbol>& rhs) {
    if (emitted.emplace(lhs, rhs).second) result.grammar.add_rule(lhs, rhs);
  };
  // Keep the original relative order: for each rule in order, emit it (or,
  // for a unit rule, the inherited rules of its target) under its lhs.
  for (const auto& p : binary) {
    if (p.rhs.size() == 1 && p.rhs[0].is_nonterminal()) {
      const NtId y = p.rhs[0].nt();
      for (NtId z = 0; z < n; ++z)
        if (unit[y][z])
          for (const Pending* q : non_unit_of[z]) emit(p.lhs, q->rhs);
    } else {
      emit(p.lhs, p.rhs);
    }
  }
  return NormalizedGvas::check(prune_nonproductive(result));
}

NormalizedGvas normalize(const Gvas& g) { return to_weak_cnf(expand_actions(g)); }

}  // namespace cbound
