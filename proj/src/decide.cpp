#include "cbound/decide.hpp"

#include <algorithm>
#include <cstdlib>

#include "cbound/certsearch.hpp"
#include "cbound/error.hpp"
#include "cbound/normalize.hpp"
#include "cbound/oracle.hpp"

namespace cbound {

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Unbounded: return "unbounded";
    case Verdict::Kind::BoundedClosure: return "bounded";
    case Verdict::Kind::BoundedCapExhausted: return "bounded";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Counter> cap_schedule(Counter c_init, Counter max_cap) {
  std::vector<Counter> out;
  for (Counter c = 16; c < max_cap; c *= 4) out.push_back(std::max(c, c_init));
  out.push_back(std::max(max_cap, c_init));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Counter> budget_schedule(Counter c_init, Counter max_budget) {
  std::vector<Counter> out;
  for (Counter b = 32; b < max_budget; b *= 2) out.push_back(std::max(b, c_init));
  out.push_back(std::max(max_budget, c_init));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Word> prefix_closure_violation(const NormalizedGvas& g, std::size_t max_len) {
  const auto& gr = g.grammar();
  Word w;
  // Odometer over {-1, 0, 1}^n for n = 0..max_len.
  for (std::size_t n = 0; n <= max_len; ++n) {
    w.assign(n, -1);
    while (true) {
      if (member(gr, g.start(), w)) {
        for (std::size_t k = 0; k < n; ++k) {
          const Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
          if (!member(gr, g.start(), prefix)) return w;
        }
      }
      std::size_t i = 0;
      while (i < n && w[i] == 1) w[i++] = -1;
      if (i == n) break;
      ++w[i];
    }
  }
  return std::nullopt;
}

Verdict decide(const Gvas& g, const DecideOptions& opts) {
  Verdict v{Verdict::Kind::Inconclusive, normalize(g), {}, 0, {}, {}, {}, {}};
  const NormalizedGvas& ng = v.normalized;

  if (opts.check_prefix_closed) {
    const auto acts = g.grammar.actions();
    const bool small = std::all_of(acts.begin(), acts.end(), [](std::int64_t a) { return std::abs(a) <= 1; });
    if (!small) {
      v.warnings.push_back("prefix-closure sampling skipped: actions outside {-1,0,1} are split by normalization");
    } else if (auto bad = prefix_closure_violation(ng, *opts.check_prefix_closed)) {
      std::string word;
      for (auto a : *bad) word += (word.empty() ? "" : " ") + std::to_string(a);
      v.warnings.push_back("language is not prefix-closed: [" + word + "] has a prefix outside it; verdicts may be unsound");
    }
  }

  const auto caps = cap_schedule(ng.c_init(), opts.max_cap);
  const auto budgets = budget_schedule(ng.c_init(), opts.oracle_max);
  for (std::size_t i = 0; i < std::max(caps.size(), budgets.size()); ++i) {
    if (i < caps.size()) {
      v.caps_tried.push_back(caps[i]);
      if (auto cert = find_certificate(ng, SearchOptions{caps[i], opts.pruning})) {
        if (!validate_certificate(ng.gvas(), *cert).empty())
          throw Error("internal error: certificate search produced an invalid certificate");
        v.kind = Verdict::Kind::Unbounded;
        v.certificate = std::move(cert);
        v.certificate_cap = caps[i];
        return v;
      }
    }
    if (i < budgets.size()) {
      v.budgets_tried.push_back(budgets[i]);
      const auto table = reach_table(ng, budgets[i]);
      if (!table.capped()) {
        v.kind = Verdict::Kind::BoundedClosure;
        v.reach_set = table.entry(ng.start(), ng.c_init());
        return v;
      }
    }
  }

  if (opts.complete) {
    const Counter cap = theoretical_cap(ng);
    v.caps_tried.push_back(cap);
    v.certificate_cap = cap;
    if (auto cert = find_certificate(ng, SearchOptions{cap, opts.pruning})) {
      v.kind = Verdict::Kind::Unbounded;
      v.certificate = std::move(cert);
    } else {
      v.kind = Verdict::Kind::BoundedCapExhausted;
    }
  }
  return v;
}

}  // namespace cbound
