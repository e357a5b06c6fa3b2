#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cbound/flow_tree.hpp"

namespace cbound {

// Node schema: {"sym": name | integer | "ε", "in": n | "-inf", "out": n | "-inf",
// "children": [...]}. Parse trees omit in/out.

nlohmann::json to_json(const Grammar& g, const ParseTree& t);
nlohmann::json to_json(const Grammar& g, const FlowNode& t);
nlohmann::json to_json(const NodePath& p);
nlohmann::json to_json(ExtNat v);

/// Missing in/out fields read as -inf. Throws Error on schema violations or
/// unknown nonterminal names.
FlowNode flow_from_json(const Grammar& g, const nlohmann::json& j);
NodePath path_from_json(const nlohmann::json& j);

/// A tree file: either a bare node or {"gvas": text?, "tree": node, "s": path?, "t": path?}.
struct TreeDocument {
  std::optional<std::string> gvas;
  nlohmann::json tree;
  std::optional<NodePath> s;
  std::optional<NodePath> t;
};

TreeDocument parse_tree_document(std::string_view text);
nlohmann::json certificate_document(const Gvas& g, const Certificate& c);

/// Graphviz rendering; marked nodes are highlighted.
std::string to_dot(const Grammar& g, const FlowNode& t, const std::optional<NodePath>& s = std::nullopt,
                   const std::optional<NodePath>& mark_t = std::nullopt);

}  // namespace cbound
