#pragma once

#include <string>
#include <string_view>

#include "cbound/grammar.hpp"

namespace cbound {

/// Parses the line-oriented GVAS format:
///
///     gvas
///     counter_init 5
///     start X1
///     X1 -> -1 X1 X0
///     X0 -> 1
///     E ->            # epsilon rule
///
/// Integer tokens are actions, every other token is a nonterminal name.
/// Throws ParseError with line/column on malformed input.
Gvas parse_gvas(std::string_view text);
std::string print_gvas(const Gvas& g);

/// True when an identifier can be printed as a nonterminal name.
bool is_valid_name(std::string_view token);

/// First declaration keyword of a text document ("gvas", "pvas", ...), or
/// an empty string.
std::string leading_keyword(std::string_view text);

namespace text_detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

/// Splits one line into whitespace-separated tokens, dropping '#' comments.
std::vector<Token> tokenize_line(std::string_view line);
bool parse_int(std::string_view s, std::int64_t& out);

}  // namespace text_detail

}  // namespace cbound
