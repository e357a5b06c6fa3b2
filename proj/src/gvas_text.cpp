#include "cbound/gvas_text.hpp"

#include <charconv>
#include <sstream>

#include "cbound/error.hpp"

namespace cbound {

namespace text_detail {

std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(begin, i - begin)), begin + 1});
  }
  return out;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace text_detail

using text_detail::parse_int;
using text_detail::Token;
using text_detail::tokenize_line;

bool is_valid_name(std::string_view token) {
  std::int64_t dummy = 0;
  if (token.empty() || token == "->" || token == "ε") return false;
  if (parse_int(token, dummy)) return false;
  if (token.front() == '-' || token.front() == '+') {
    // "-x" would be ambiguous with negative literals when hand-edited.
    return false;
  }
  return token.find_first_of("#\"") == std::string_view::npos;
}

std::string leading_keyword(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto toks = tokenize_line(line);
    if (!toks.empty()) return toks.front().text;
  }
  return {};
}

Gvas parse_gvas(std::string_view text) {
  Gvas g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  bool have_init = false;
  std::optional<std::string> start;
  std::size_t start_line = 0;

  auto name_or_throw = [&](const Token& t) {
    if (!is_valid_name(t.text)) throw ParseError(lineno, t.column, "invalid nonterminal name '" + t.text + "'");
    return g.grammar.intern(t.text);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0].text != "gvas" || toks.size() != 1)
        throw ParseError(lineno, toks[0].column, "expected 'gvas' header");
      header = true;
      continue;
    }
    const auto& kw = toks[0].text;
    if (kw == "counter_init") {
      if (have_init) throw ParseError(lineno, toks[0].column, "duplicate counter_init");
      if (toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'counter_init <nat>'");
      std::int64_t v = 0;
      if (!parse_int(toks[1].text, v) || v < 0)
        throw ParseError(lineno, toks[1].column, "counter_init must be a natural number");
      g.c_init = v;
      have_init = true;
    } else if (kw == "start") {
      if (start) throw ParseError(lineno, toks[0].column, "duplicate start declaration");
      if (toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'start <name>'");
      name_or_throw(toks[1]);
      start = toks[1].text;
      start_line = lineno;
    } else if (toks.size() >= 2 && toks[1].text == "->") {
      const NtId lhs = name_or_throw(toks[0]);
      std::vector<Symbol> rhs;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        std::int64_t a = 0;
        if (parse_int(toks[i].text, a)) {
          rhs.push_back(Symbol::action(a));
        } else {
          rhs.push_back(Symbol::nonterminal(name_or_throw(toks[i])));
        }
      }
      g.grammar.add_rule(lhs, std::move(rhs));
    } else {
      throw ParseError(lineno, toks[0].column, "unrecognised declaration '" + kw + "'");
    }
  }
  if (!header) throw ParseError(lineno == 0 ? 1 : lineno, 1, "empty input, expected 'gvas' header");
  if (!start) throw ParseError(lineno, 1, "missing 'start' declaration");
  (void)start_line;
  g.grammar.set_start(g.grammar.at(*start));
  return g;
}

std::string print_gvas(const Gvas& g) {
  std::ostringstream out;
  out << "gvas\n";
  out << "counter_init " << g.c_init << "\n";
  out << "start " << g.grammar.name(g.grammar.start()) << "\n";
  for (const auto& r : g.grammar.rules()) {
    out << g.grammar.name(r.lhs) << " ->";
    for (const auto& s : r.rhs) out << ' ' << g.grammar.symbol_name(s);
    out << "\n";
  }
  return out.str();
}

}  // namespace cbound
