#include "cbound/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cbound/error.hpp"
#include "cbound/normalize.hpp"

namespace cbound {

namespace {

constexpr RuleId kNoRule = std::numeric_limits<RuleId>::max();

struct Back {
  RuleId rule = kNoRule;
  Counter mid = -1;
};

// (x, c) waits for outputs m of (y, c) in order to need (z, m).
struct LeftWaiter {
  NtId x;
  Counter c;
  RuleId rule;
  NtId z;
};

// (x, c) inherits every output of (z, mid).
struct RightWaiter {
  NtId x;
  Counter c;
  RuleId rule;
  Counter mid;
};

struct Entry {
  std::vector<Back> back;
  std::vector<Counter> outs;  // insertion order
  std::size_t dispatched = 0;
  std::vector<LeftWaiter> left;
  std::vector<RightWaiter> right;
};

}  // namespace

struct ReachTable::Impl {
  const Grammar& g;
  Counter n;
  bool capped = false;
  std::vector<std::unique_ptr<Entry>> entries;
  std::deque<std::pair<NtId, Counter>> events;

  Impl(const Grammar& grammar, Counter budget)
      : g(grammar), n(budget), entries(grammar.num_nonterminals() * static_cast<std::size_t>(budget + 1)) {}

  std::size_t key(NtId x, Counter c) const { return static_cast<std::size_t>(x) * (n + 1) + c; }
  Entry* find(NtId x, Counter c) const {
    if (c < 0 || c > n) return nullptr;
    return entries[key(x, c)].get();
  }

  void add_fact(NtId x, Counter c, Counter d, RuleId rule, Counter mid) {
    Entry& e = *entries[key(x, c)];
    if (e.back[d].rule != kNoRule) return;
    e.back[d] = Back{rule, mid};
    e.outs.push_back(d);
    events.emplace_back(x, c);
  }

  void on_left(const LeftWaiter& w, Counter m) {
    Entry& ez = need(w.z, m);
    ez.right.push_back(RightWaiter{w.x, w.c, w.rule, m});
    for (std::size_t i = 0; i < ez.dispatched; ++i) add_fact(w.x, w.c, ez.outs[i], w.rule, m);
  }

  Entry& need(NtId x, Counter c) {
    auto& slot = entries[key(x, c)];
    if (slot) return *slot;
    slot = std::make_unique<Entry>();
    Entry& e = *slot;
    e.back.resize(static_cast<std::size_t>(n + 1));
    for (RuleId r : g.rules_of(x)) {
      const auto& rhs = g.rule(r).rhs;
      if (rhs.empty()) {
        add_fact(x, c, c, r, -1);
      } else if (rhs.size() == 1) {
        const Counter v = c + rhs[0].value;
        if (v > n) capped = true;
        else if (v >= 0) add_fact(x, c, v, r, -1);
      } else {
        const LeftWaiter w{x, c, r, rhs[1].nt()};
        Entry& ey = need(rhs[0].nt(), c);
        ey.left.push_back(w);
        for (std::size_t i = 0; i < ey.dispatched; ++i) on_left(w, ey.outs[i]);
      }
    }
    return e;
  }

  void run() {
    while (!events.empty()) {
      const auto [x, c] = events.front();
      events.pop_front();
      Entry& e = *entries[key(x, c)];
      const Counter d = e.outs[e.dispatched++];
      const auto nl = e.left.size();
      const auto nr = e.right.size();
      for (std::size_t i = 0; i < nl; ++i) on_left(LeftWaiter(e.left[i]), d);
      for (std::size_t i = 0; i < nr; ++i) {
        const RightWaiter w = e.right[i];
        add_fact(w.x, w.c, d, w.rule, w.mid);
      }
    }
  }

  ParseTree witness(NtId x, Counter c, Counter d) const {
    const Back b = find(x, c)->back[d];
    const auto& rhs = g.rule(b.rule).rhs;
    ParseTree t{Symbol::nonterminal(x), {}};
    if (rhs.empty()) {
      t.children.push_back(ParseTree::leaf(Symbol::epsilon()));
    } else if (rhs.size() == 1) {
      t.children.push_back(ParseTree::leaf(rhs[0]));
    } else {
      t.children.push_back(witness(rhs[0].nt(), c, b.mid));
      t.children.push_back(witness(rhs[1].nt(), b.mid, d));
    }
    return t;
  }

  FlowNode witness_flow(NtId x, Counter c, Counter d) const {
    const Back b = find(x, c)->back[d];
    const auto& rhs = g.rule(b.rule).rhs;
    FlowNode t{Symbol::nonterminal(x), c, d, {}};
    if (rhs.empty()) {
      t.children.push_back(FlowNode{Symbol::epsilon(), c, c, {}});
    } else if (rhs.size() == 1) {
      t.children.push_back(FlowNode{rhs[0], c, c + rhs[0].value, {}});
    } else {
      t.children.push_back(witness_flow(rhs[0].nt(), c, b.mid));
      t.children.push_back(witness_flow(rhs[1].nt(), b.mid, d));
    }
    return t;
  }
};

ReachTable::ReachTable(const NormalizedGvas& g, Counter budget, NtId seed, Counter seed_input)
    : impl_(std::make_unique<Impl>(g.grammar(), budget)) {
  if (budget < 0) throw Error("oracle budget must be a natural number");
  if (seed_input < 0 || seed_input > budget) {
    impl_->capped = seed_input > budget;
    return;
  }
  impl_->need(seed, seed_input);
  impl_->run();
}

ReachTable::~ReachTable() = default;
ReachTable::ReachTable(ReachTable&&) noexcept = default;
ReachTable& ReachTable::operator=(ReachTable&&) noexcept = default;

Counter ReachTable::budget() const { return impl_->n; }
bool ReachTable::capped() const { return impl_->capped; }
bool ReachTable::explored(NtId x, Counter c) const { return impl_->find(x, c) != nullptr; }

std::set<Counter> ReachTable::entry(NtId x, Counter c) const {
  const Entry* e = impl_->find(x, c);
  if (!e) return {};
  return {e->outs.begin(), e->outs.end()};
}

bool ReachTable::contains(NtId x, Counter c, Counter d) const {
  const Entry* e = impl_->find(x, c);
  return e && d >= 0 && d <= impl_->n && e->back[d].rule != kNoRule;
}

std::size_t ReachTable::explored_pairs() const {
  return static_cast<std::size_t>(std::count_if(impl_->entries.begin(), impl_->entries.end(),
                                                [](const auto& p) { return p != nullptr; }));
}

std::optional<ParseTree> ReachTable::witness(NtId x, Counter c, Counter d) const {
  if (!contains(x, c, d)) return std::nullopt;
  return impl_->witness(x, c, d);
}

std::optional<FlowTree> ReachTable::witness_flow(NtId x, Counter c, Counter d) const {
  if (!contains(x, c, d)) return std::nullopt;
  return impl_->witness_flow(x, c, d);
}

bool ReachTable::is_fixpoint() const {
  const auto& g = impl_->g;
  const Counter n = impl_->n;
  for (NtId x = 0; x < g.num_nonterminals(); ++x) {
    for (Counter c = 0; c <= n; ++c) {
      if (!explored(x, c)) continue;
      for (RuleId r : g.rules_of(x)) {
        const auto& rhs = g.rule(r).rhs;
        if (rhs.empty()) {
          if (!contains(x, c, c)) return false;
        } else if (rhs.size() == 1) {
          const Counter v = c + rhs[0].value;
          if (v >= 0 && v <= n && !contains(x, c, v)) return false;
        } else {
          if (!explored(rhs[0].nt(), c)) return false;
          for (Counter m : entry(rhs[0].nt(), c)) {
            if (!explored(rhs[1].nt(), m)) return false;
            for (Counter e : entry(rhs[1].nt(), m))
              if (!contains(x, c, e)) return false;
          }
        }
      }
    }
  }
  return true;
}

ReachTable reach_table(const NormalizedGvas& g, Counter budget) {
  return ReachTable(g, budget, g.start(), g.c_init());
}

OracleResult reachability_set(const Gvas& g, Counter budget) {
  const auto ng = normalize(g);
  const auto table = reach_table(ng, budget);
  return OracleResult{!table.capped(), table.entry(ng.start(), ng.c_init())};
}

OracleResult general_reachability_set(const Gvas& g, Counter budget) {
  const auto& gr = g.grammar;
  const auto nv = gr.num_nonterminals();
  const auto width = static_cast<std::size_t>(budget + 1);
  OracleResult res;
  if (g.c_init > budget) return res;

  std::vector<std::vector<char>> needed(nv, std::vector<char>(width, 0));
  std::vector<std::vector<std::vector<char>>> rel(nv, std::vector<std::vector<char>>(width, std::vector<char>(width, 0)));
  bool capped = false;
  needed[gr.start()][g.c_init] = 1;

  for (bool changed = true; changed;) {
    changed = false;
    for (NtId x = 0; x < nv; ++x) {
      for (std::size_t c = 0; c < width; ++c) {
        if (!needed[x][c]) continue;
        for (RuleId r : gr.rules_of(x)) {
          std::vector<char> cur(width, 0);
          cur[c] = 1;
          for (const auto& s : gr.rule(r).rhs) {
            std::vector<char> next(width, 0);
            for (std::size_t v = 0; v < width; ++v) {
              if (!cur[v]) continue;
              if (s.is_action()) {
                const auto w = static_cast<Counter>(v) + s.value;
                if (w > budget) capped = true;
                else if (w >= 0) next[w] = 1;
              } else {
                if (!needed[s.nt()][v]) {
                  needed[s.nt()][v] = 1;
                  changed = true;
                }
                for (std::size_t e = 0; e < width; ++e)
                  if (rel[s.nt()][v][e]) next[e] = 1;
              }
            }
            cur = std::move(next);
          }
          for (std::size_t e = 0; e < width; ++e)
            if (cur[e] && !rel[x][c][e]) {
              rel[x][c][e] = 1;
              changed = true;
            }
        }
      }
    }
  }
  res.closed = !capped;
  for (std::size_t e = 0; e < width; ++e)
    if (rel[gr.start()][g.c_init][e]) res.values.insert(static_cast<Counter>(e));
  return res;
}

MaxReach max_reachable(const NormalizedGvas& g, NtId x, Counter c, Counter budget) {
  const ReachTable t(g, budget, x, c);
  const auto e = t.entry(x, c);
  MaxReach out;
  out.capped = t.capped();
  if (!e.empty()) out.max = *e.rbegin();
  return out;
}

FlowTree build_flow_tree(const NormalizedGvas& g, NtId x, Counter c, Counter d, Counter budget) {
  budget = std::max({budget, c, d});
  const ReachTable t(g, budget, x, c);
  auto ft = t.witness_flow(x, c, d);
  if (!ft)
    throw Error("no run of '" + g.grammar().name(x) + "' from " + std::to_string(c) + " to " +
                std::to_string(d));
  return *ft;
}

}  // namespace cbound
