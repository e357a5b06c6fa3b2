#include "cbound/random_instances.hpp"

#include <random>

#include "cbound/error.hpp"

namespace cbound {

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

std::int64_t pick_signed(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

}  // namespace

Gvas random_gvas(std::uint64_t seed, const RandomGvasParams& p) {
  std::mt19937_64 rng(seed);
  for (;;) {
    Gvas g;
    const auto n = pick(rng, 1, p.max_nonterminals);
    for (std::size_t i = 0; i < n; ++i) g.grammar.intern("N" + std::to_string(i));
    for (NtId x = 0; x < n; ++x) {
      const auto rules = pick(rng, 1, p.max_rules_per_symbol);
      for (std::size_t r = 0; r < rules; ++r) {
        std::vector<Symbol> rhs;
        const auto len = pick(rng, 0, p.max_rhs);
        for (std::size_t k = 0; k < len; ++k) {
          if (pick(rng, 0, 1) == 0) rhs.push_back(Symbol::nonterminal(static_cast<NtId>(pick(rng, 0, n - 1))));
          else rhs.push_back(Symbol::action(pick_signed(rng, -p.max_abs_action, p.max_abs_action)));
        }
        g.grammar.add_rule(x, std::move(rhs));
      }
    }
    g.grammar.set_start(0);
    g.c_init = pick_signed(rng, 0, p.max_c_init);
    if (productive_set(g.grammar)[0]) return prune_nonproductive(g);
  }
}

NormalizedGvas random_normalized(std::uint64_t seed, std::size_t max_nonterminals, Counter max_c_init) {
  std::mt19937_64 rng(seed);
  for (;;) {
    Gvas g;
    const auto n = pick(rng, 1, max_nonterminals);
    for (std::size_t i = 0; i < n; ++i) g.grammar.intern("N" + std::to_string(i));
    for (NtId x = 0; x < n; ++x) {
      const auto rules = pick(rng, 1, 3);
      std::vector<std::vector<Symbol>> seen;
      for (std::size_t r = 0; r < rules; ++r) {
        std::vector<Symbol> rhs;
        switch (pick(rng, 0, 4)) {
          case 0:
          case 1:
          case 2:
            rhs = {Symbol::nonterminal(static_cast<NtId>(pick(rng, 0, n - 1))),
                   Symbol::nonterminal(static_cast<NtId>(pick(rng, 0, n - 1)))};
            break;
          case 3: rhs = {Symbol::action(pick_signed(rng, -1, 1))}; break;
          default: break;
        }
        if (std::find(seen.begin(), seen.end(), rhs) != seen.end()) continue;
        seen.push_back(rhs);
        g.grammar.add_rule(x, rhs);
      }
    }
    g.grammar.set_start(0);
    g.c_init = pick_signed(rng, 0, max_c_init);
    const auto prod = productive_set(g.grammar);
    if (std::all_of(prod.begin(), prod.end(), [](bool b) { return b; })) return NormalizedGvas::check(std::move(g));
  }
}

Pvas random_pvas(std::uint64_t seed, const RandomPvasParams& p) {
  std::mt19937_64 rng(seed);
  Pvas out;
  const auto ns = pick(rng, 1, p.max_states);
  const auto nsym = pick(rng, 1, p.max_stack_symbols);
  for (std::size_t i = 0; i < ns; ++i) out.states.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < nsym; ++i) out.stack_alphabet.push_back(std::string(1, static_cast<char>('A' + i)));
  out.q_init = 0;
  out.c_init = {pick_signed(rng, 0, p.max_c_init)};
  const auto wlen = pick(rng, 0, p.max_initial_stack);
  for (std::size_t i = 0; i < wlen; ++i) out.w_init.push_back(static_cast<StackSym>(pick(rng, 0, nsym - 1)));
  const auto nt = pick(rng, 1, p.max_transitions);
  for (std::size_t i = 0; i < nt; ++i) {
    Transition t;
    t.source = static_cast<StateId>(pick(rng, 0, ns - 1));
    t.target = static_cast<StateId>(pick(rng, 0, ns - 1));
    t.delta = {pick_signed(rng, -p.max_abs_delta, p.max_abs_delta)};
    const auto g = static_cast<StackSym>(pick(rng, 0, nsym - 1));
    switch (pick(rng, 0, 2)) {
      case 0: t.op = StackOp::nop(); break;
      case 1: t.op = StackOp::push(g); break;
      default: t.op = StackOp::pop(g); break;
    }
    out.transitions.push_back(std::move(t));
  }
  out.validate();
  return out;
}

}  // namespace cbound
