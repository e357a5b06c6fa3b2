#include "cbound/pvas.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "cbound/error.hpp"
#include "cbound/gvas_text.hpp"

namespace cbound {

void Pvas::validate() const {
  if (states.empty()) throw Error("PVAS has no states");
  if (q_init >= states.size()) throw Error("initial state out of range");
  for (auto c : c_init)
    if (c < 0) throw Error("initial counter values must be natural numbers");
  for (auto g : w_init)
    if (g >= stack_alphabet.size()) throw Error("initial stack symbol out of range");
  for (const auto& t : transitions) {
    if (t.source >= states.size() || t.target >= states.size()) throw Error("transition state out of range");
    if (t.delta.size() != dimension()) throw Error("transition delta has wrong dimension");
    if (t.op.kind != StackOp::Kind::Nop && t.op.symbol >= stack_alphabet.size())
      throw Error("transition stack symbol out of range");
  }
}

Config initial_config(const Pvas& p) { return Config{p.q_init, p.c_init, p.w_init}; }

std::vector<Config> step(const Pvas& p, const Config& c) {
  std::set<Config> out;
  for (const auto& t : p.transitions) {
    if (t.source != c.state) continue;
    Config next{t.target, c.counters, c.stack};
    bool ok = true;
    for (std::size_t i = 0; i < t.delta.size(); ++i) {
      next.counters[i] += t.delta[i];
      if (next.counters[i] < 0) ok = false;
    }
    if (!ok) continue;
    switch (t.op.kind) {
      case StackOp::Kind::Nop: break;
      case StackOp::Kind::Push: next.stack.push_back(t.op.symbol); break;
      case StackOp::Kind::Pop:
        if (next.stack.empty() || next.stack.back() != t.op.symbol) continue;
        next.stack.pop_back();
        break;
    }
    out.insert(std::move(next));
  }
  return {out.begin(), out.end()};
}

std::set<std::vector<Counter>> BfsResult::counter_values() const {
  std::set<std::vector<Counter>> out;
  for (const auto& c : configs) out.insert(c.counters);
  return out;
}

BfsResult bfs_reach(const Pvas& p, Counter max_counter, std::size_t max_stack, std::size_t max_configs) {
  p.validate();
  BfsResult res;
  std::deque<Config> queue;
  Config init = initial_config(p);
  res.configs.insert(init);
  queue.push_back(std::move(init));
  while (!queue.empty()) {
    Config cur = std::move(queue.front());
    queue.pop_front();
    for (auto& next : step(p, cur)) {
      bool over = false;
      for (auto v : next.counters)
        if (v > max_counter) over = true;
      if (over) {
        res.hit_max_counter = true;
        continue;
      }
      if (next.stack.size() > max_stack) {
        res.hit_max_stack = true;
        continue;
      }
      if (res.configs.contains(next)) continue;
      if (res.configs.size() >= max_configs) {
        res.hit_max_configs = true;
        continue;
      }
      res.configs.insert(next);
      queue.push_back(std::move(next));
    }
  }
  return res;
}

namespace {

// Grammar builder for the run-prefix language. Nonterminals are created on
// demand from the start symbol so unreachable triples never materialise.
class Reduction {
 public:
  explicit Reduction(const Pvas& p) : p_(p), by_source_(p.states.size()) {
    for (const auto& t : p.transitions) by_source_[t.source].push_back(&t);
  }

  Gvas run() {
    out_.c_init = p_.c_init.at(0);
    const NtId start = run_nt(p_.q_init, p_.w_init.size());
    out_.grammar.set_start(start);
    while (!pending_.empty()) {
      const Key k = pending_.front();
      pending_.pop_front();
      expand(k);
    }
    return std::move(out_);
  }

 private:
  enum class Kind { Trip, Live, Run };
  using Key = std::tuple<Kind, std::uint32_t, std::uint32_t, std::uint32_t>;

  NtId get(const Key& k) {
    if (auto it = ids_.find(k); it != ids_.end()) return it->second;
    const auto& [kind, a, b, c] = k;
    std::string name;
    switch (kind) {
      case Kind::Trip:
        name = "@Trip[" + p_.states[a] + "," + p_.stack_alphabet[b] + "," + p_.states[c] + "]";
        break;
      case Kind::Live: name = "@Live[" + p_.states[a] + "," + p_.stack_alphabet[b] + "]"; break;
      case Kind::Run: name = "@Run[" + p_.states[a] + "," + std::to_string(b) + "]"; break;
    }
    const NtId id = out_.grammar.intern(name);
    ids_.emplace(k, id);
    pending_.push_back(k);
    return id;
  }

  Symbol trip(StateId p, StackSym g, StateId q) { return Symbol::nonterminal(get({Kind::Trip, p, g, q})); }
  Symbol live(StateId p, StackSym g) { return Symbol::nonterminal(get({Kind::Live, p, g, 0})); }
  NtId run_nt(StateId p, std::size_t i) { return get({Kind::Run, p, static_cast<std::uint32_t>(i), 0}); }
  Symbol run(StateId p, std::size_t i) { return Symbol::nonterminal(run_nt(p, i)); }

  void add(NtId lhs, std::vector<Symbol> rhs) { out_.grammar.add_rule(lhs, std::move(rhs)); }

  void expand(const Key& k) {
    const NtId self = ids_.at(k);
    const auto& [kind, a, b, c] = k;
    const auto nstates = static_cast<StateId>(p_.states.size());
    switch (kind) {
      case Kind::Trip: {
        const StackSym gamma = b;
        const StateId q = c;
        for (const Transition* t : by_source_[a]) {
          const auto act = Symbol::action(t->delta[0]);
          switch (t->op.kind) {
            case StackOp::Kind::Nop: add(self, {act, trip(t->target, gamma, q)}); break;
            case StackOp::Kind::Push:
              for (StateId r = 0; r < nstates; ++r)
                add(self, {act, trip(t->target, t->op.symbol, r), trip(r, gamma, q)});
              break;
            case StackOp::Kind::Pop:
              if (t->op.symbol == gamma && t->target == q) add(self, {act});
              break;
          }
        }
        break;
      }
      case Kind::Live: {
        const StackSym gamma = b;
        add(self, {});
        for (const Transition* t : by_source_[a]) {
          const auto act = Symbol::action(t->delta[0]);
          switch (t->op.kind) {
            case StackOp::Kind::Nop: add(self, {act, live(t->target, gamma)}); break;
            case StackOp::Kind::Push:
              add(self, {act, live(t->target, t->op.symbol)});
              for (StateId r = 0; r < nstates; ++r)
                add(self, {act, trip(t->target, t->op.symbol, r), live(r, gamma)});
              break;
            case StackOp::Kind::Pop: break;
          }
        }
        break;
      }
      case Kind::Run: {
        const std::size_t depth = b;
        if (depth == 0) {
          add(self, {});
          for (const Transition* t : by_source_[a]) {
            const auto act = Symbol::action(t->delta[0]);
            switch (t->op.kind) {
              case StackOp::Kind::Nop: add(self, {act, run(t->target, 0)}); break;
              case StackOp::Kind::Push:
                add(self, {act, live(t->target, t->op.symbol)});
                for (StateId r = 0; r < nstates; ++r)
                  add(self, {act, trip(t->target, t->op.symbol, r), run(r, 0)});
                break;
              case StackOp::Kind::Pop: break;
            }
          }
        } else {
          const StackSym gamma = p_.w_init[depth - 1];
          for (StateId q = 0; q < nstates; ++q) add(self, {trip(a, gamma, q), run(q, depth - 1)});
          add(self, {live(a, gamma)});
        }
        break;
      }
    }
  }

  const Pvas& p_;
  std::vector<std::vector<const Transition*>> by_source_;
  Gvas out_;
  std::map<Key, NtId> ids_;
  std::deque<Key> pending_;
};

bool is_state_name(std::string_view s) { return is_valid_name(s) && s.find(',') == std::string_view::npos; }

}  // namespace

Gvas reduce_to_gvas(const Pvas& p) {
  p.validate();
  if (p.dimension() != 1) throw Error("decision pipeline is 1-dimensional");
  return Reduction(p).run();
}

Pvas parse_pvas(std::string_view text) {
  using text_detail::parse_int;
  using text_detail::tokenize_line;

  Pvas p;
  std::unordered_map<std::string, StateId> state_ids;
  std::unordered_map<std::string, StackSym> sym_ids;
  auto state = [&](const text_detail::Token& t, std::size_t line) {
    if (!is_state_name(t.text)) throw ParseError(line, t.column, "invalid state name '" + t.text + "'");
    auto [it, fresh] = state_ids.emplace(t.text, static_cast<StateId>(p.states.size()));
    if (fresh) p.states.push_back(t.text);
    return it->second;
  };
  auto stack_sym = [&](const std::string& s, std::size_t line, std::size_t col) {
    if (!is_state_name(s)) throw ParseError(line, col, "invalid stack symbol '" + s + "'");
    auto [it, fresh] = sym_ids.emplace(s, static_cast<StackSym>(p.stack_alphabet.size()));
    if (fresh) p.stack_alphabet.push_back(s);
    return it->second;
  };
  auto split_commas = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto comma = s.find(',', pos);
      parts.push_back(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return parts;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::optional<std::size_t> dim;
  bool have_init = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0].text != "pvas" || toks.size() != 1) throw ParseError(lineno, toks[0].column, "expected 'pvas' header");
      header = true;
      continue;
    }
    const auto& kw = toks[0].text;
    if (kw == "dim") {
      std::int64_t k = 0;
      if (dim) throw ParseError(lineno, toks[0].column, "duplicate dim declaration");
      if (toks.size() != 2 || !parse_int(toks[1].text, k) || k < 1)
        throw ParseError(lineno, toks[0].column, "expected 'dim <k>' with k >= 1");
      dim = static_cast<std::size_t>(k);
    } else if (kw == "init") {
      if (!dim) throw ParseError(lineno, toks[0].column, "'dim' must precede 'init'");
      if (have_init) throw ParseError(lineno, toks[0].column, "duplicate init declaration");
      if (toks.size() != *dim + 3)
        throw ParseError(lineno, toks[0].column, "expected 'init <state> <c_1 .. c_k> <stack-word|->'");
      p.q_init = state(toks[1], lineno);
      for (std::size_t i = 0; i < *dim; ++i) {
        std::int64_t v = 0;
        if (!parse_int(toks[2 + i].text, v) || v < 0)
          throw ParseError(lineno, toks[2 + i].column, "initial counter must be a natural number");
        p.c_init.push_back(v);
      }
      const auto& w = toks[2 + *dim];
      if (w.text != "-")
        for (const auto& s : split_commas(w.text)) p.w_init.push_back(stack_sym(s, lineno, w.column));
      have_init = true;
    } else if (toks.size() >= 3 && toks[1].text == "->") {
      if (!dim) throw ParseError(lineno, toks[0].column, "'dim' must precede transitions");
      Transition t;
      t.source = state(toks[0], lineno);
      t.target = state(toks[2], lineno);
      t.delta.assign(*dim, 0);
      std::size_t i = 3;
      if (i < toks.size() && toks[i].text == ":") ++i;
      bool have_op = false;
      for (; i < toks.size(); ++i) {
        const auto& tok = toks[i];
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, tok.column, "expected key=value, got '" + tok.text + "'");
        const auto key = tok.text.substr(0, eq);
        const auto value = tok.text.substr(eq + 1);
        if (key == "add") {
          const auto parts = split_commas(value);
          if (parts.size() != *dim) throw ParseError(lineno, tok.column, "add= needs exactly " + std::to_string(*dim) + " components");
          for (std::size_t k = 0; k < parts.size(); ++k)
            if (!parse_int(parts[k], t.delta[k])) throw ParseError(lineno, tok.column, "malformed integer in add=");
        } else if (key == "push" || key == "pop") {
          if (have_op) throw ParseError(lineno, tok.column, "at most one stack operation per transition");
          const auto g = stack_sym(value, lineno, tok.column + eq + 1);
          t.op = key == "push" ? StackOp::push(g) : StackOp::pop(g);
          have_op = true;
        } else {
          throw ParseError(lineno, tok.column, "unknown transition attribute '" + key + "'");
        }
      }
      p.transitions.push_back(std::move(t));
    } else {
      throw ParseError(lineno, toks[0].column, "unrecognised declaration '" + kw + "'");
    }
  }
  if (!header) throw ParseError(1, 1, "empty input, expected 'pvas' header");
  if (!dim) throw ParseError(lineno, 1, "missing 'dim' declaration");
  if (!have_init) throw ParseError(lineno, 1, "missing 'init' declaration");
  p.validate();
  return p;
}

std::string print_pvas(const Pvas& p) {
  std::ostringstream out;
  out << "pvas\n";
  out << "dim " << p.dimension() << "\n";
  out << "init " << p.states.at(p.q_init);
  for (auto c : p.c_init) out << ' ' << c;
  out << ' ';
  if (p.w_init.empty()) {
    out << '-';
  } else {
    for (std::size_t i = 0; i < p.w_init.size(); ++i) out << (i ? "," : "") << p.stack_alphabet[p.w_init[i]];
  }
  out << "\n";
  for (const auto& t : p.transitions) {
    out << p.states[t.source] << " -> " << p.states[t.target] << " : add=";
    for (std::size_t i = 0; i < t.delta.size(); ++i) out << (i ? "," : "") << t.delta[i];
    if (t.op.kind == StackOp::Kind::Push) out << " push=" << p.stack_alphabet[t.op.symbol];
    if (t.op.kind == StackOp::Kind::Pop) out << " pop=" << p.stack_alphabet[t.op.symbol];
    out << "\n";
  }
  return out.str();
}

}  // namespace cbound
