#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cbound {

using Counter = std::int64_t;
using NtId = std::uint32_t;
using RuleId = std::uint32_t;
using Word = std::vector<std::int64_t>;

/// Prefix reserved for nonterminals invented by transformations.
inline constexpr std::string_view kFreshPrefix = "@";

/// Grammar symbol: a nonterminal, an integer action, or the empty word.
struct Symbol {
  enum class Kind : std::uint8_t { Nonterminal, Action, Epsilon };

  Kind kind = Kind::Epsilon;
  std::int64_t value = 0;  // nonterminal id or action delta

  static constexpr Symbol nonterminal(NtId id) { return {Kind::Nonterminal, id}; }
  static constexpr Symbol action(std::int64_t a) { return {Kind::Action, a}; }
  static constexpr Symbol epsilon() { return {Kind::Epsilon, 0}; }

  constexpr bool is_nonterminal() const { return kind == Kind::Nonterminal; }
  constexpr bool is_action() const { return kind == Kind::Action; }
  constexpr bool is_epsilon() const { return kind == Kind::Epsilon; }
  constexpr NtId nt() const { return static_cast<NtId>(value); }

  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Rule {
  NtId lhs = 0;
  std::vector<Symbol> rhs;  // empty rhs is an epsilon rule

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Context-free grammar over integer actions. Rules keep their insertion index;
/// every iteration order in the library is rule-index order.
class Grammar {
 public:
  /// Returns the id of `name`, creating it when absent.
  NtId intern(std::string_view name);
  std::optional<NtId> find(std::string_view name) const;
  /// Like find() but throws Error when the name is unknown.
  NtId at(std::string_view name) const;
  const std::string& name(NtId id) const { return names_.at(id); }
  std::size_t num_nonterminals() const { return names_.size(); }

  /// A name not yet in use, of the form `@<stem><n>`.
  std::string fresh_name(std::string_view stem) const;

  RuleId add_rule(NtId lhs, std::vector<Symbol> rhs);
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(RuleId r) const { return rules_.at(r); }
  /// Rule indices with the given left-hand side, ascending.
  const std::vector<RuleId>& rules_of(NtId lhs) const { return by_lhs_.at(lhs); }

  NtId start() const { return start_; }
  void set_start(NtId s) { start_ = s; }

  /// Distinct actions occurring in rule right-hand sides.
  std::set<std::int64_t> actions() const;

  std::string symbol_name(const Symbol& s) const;

  /// Structural equality by names (nonterminal numbering may differ).
  bool same_as(const Grammar& other) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NtId> ids_;
  std::vector<Rule> rules_;
  std::vector<std::vector<RuleId>> by_lhs_;
  NtId start_ = 0;
};

/// One-dimensional grammar-controlled VAS.
struct Gvas {
  Grammar grammar;
  Counter c_init = 0;
};

/// Gvas whose rules all have shape X -> Y Z, X -> a with a in {-1,0,1}, or
/// X -> eps, and whose nonterminals are all productive. Only obtainable
/// through check() or normalize().
class NormalizedGvas {
 public:
  /// Throws Error describing the first offending rule or symbol.
  static NormalizedGvas check(Gvas g);

  const Gvas& gvas() const { return g_; }
  const Grammar& grammar() const { return g_.grammar; }
  Counter c_init() const { return g_.c_init; }
  NtId start() const { return g_.grammar.start(); }
  std::size_t num_nonterminals() const { return g_.grammar.num_nonterminals(); }

  /// Same grammar with another start symbol.
  NormalizedGvas with_start(NtId s) const;
  NormalizedGvas with_c_init(Counter c) const;

 private:
  explicit NormalizedGvas(Gvas g) : g_(std::move(g)) {}
  Gvas g_;
};

/// Shape test used by check() and member().
bool has_normalized_shape(const Grammar& g, std::string* why = nullptr);

struct ParseTree {
  Symbol label;
  std::vector<ParseTree> children;

  static ParseTree leaf(Symbol s) { return ParseTree{s, {}}; }

  std::size_t size() const;
  std::size_t height() const;
  /// Number of leaves labelled by a nonterminal.
  std::size_t open_leaves() const;
  friend bool operator==(const ParseTree&, const ParseTree&) = default;
};

using NodePath = std::vector<std::size_t>;

std::string path_to_string(const NodePath& p);
/// Accepts "", "e", "root" or a dotted list such as "0.1.2".
NodePath path_from_string(std::string_view s);
bool is_strict_prefix(const NodePath& a, const NodePath& b);

/// Leaf actions from left to right. Throws Error naming the first
/// nonterminal leaf when the tree is incomplete.
Word yield_of(const ParseTree& tree);
/// Leaf symbols from left to right, nonterminal leaves included.
std::vector<Symbol> sentential_yield(const ParseTree& tree);
std::int64_t sum_of(const Word& w);

/// Checks that every internal node expands by some rule of `g`. Returns an
/// empty string when the tree is a parse tree, a diagnostic otherwise.
std::string check_parse_tree(const Grammar& g, const ParseTree& tree);

std::vector<bool> productive_set(const Grammar& g);
/// Drops non-productive nonterminals and every rule mentioning one.
/// Throws Error("empty language") when the start symbol is not productive.
Gvas prune_nonproductive(const Gvas& g);

/// Nonterminals occurring in some sentential form derived from the start.
std::vector<bool> derivable_set(const Grammar& g);

/// Tabular recognition. Throws Error when `g` is not in normalized shape.
bool member(const Grammar& g, NtId x, const Word& w);
/// A complete parse tree for `w` rooted at `x`, if `w` is in L(G[x]).
std::optional<ParseTree> member_tree(const Grammar& g, NtId x, const Word& w);

}  // namespace cbound
