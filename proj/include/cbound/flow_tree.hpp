#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "cbound/ext_value.hpp"
#include "cbound/grammar.hpp"

namespace cbound {

/// Parse tree node annotated with input and output values.
struct FlowNode {
  Symbol label;
  ExtNat in;
  ExtNat out;
  std::vector<FlowNode> children;

  std::size_t size() const;
  friend bool operator==(const FlowNode&, const FlowNode&) = default;
};

using FlowTree = FlowNode;

ParseTree underlying(const FlowNode& ft);
/// Copies `t` with every annotation set to -inf.
FlowNode with_bottom_annotations(const ParseTree& t);

/// Throws Error when the path does not address a node.
const FlowNode& node_at(const FlowNode& root, const NodePath& p);
FlowNode& node_at(FlowNode& root, const NodePath& p);

struct Certificate {
  FlowTree flow;
  NodePath s;
  NodePath t;
};

struct Violation {
  NodePath path;
  std::string message;
};

std::string describe(const Violation& v);

/// Grammar shape, completeness and the local flow inequalities at every node;
/// the root may be any symbol with any input.
std::vector<Violation> check_flow_conditions(const Grammar& g, const FlowTree& ft);

/// check_flow_conditions plus root labelled by the start symbol with input
/// c_init. Empty result means valid.
std::vector<Violation> validate_flow_tree(const Gvas& g, const FlowTree& ft);

std::vector<Violation> validate_certificate(const Gvas& g, const Certificate& cert);

struct NodePair {
  NodePath s;
  NodePath t;
};

/// Some node t and proper ancestor s with equal symbols and in(s) <= in(t).
/// Scans t in pre-order and returns the topmost matching ancestor.
std::optional<NodePair> is_good(const FlowTree& ft);

struct Rank {
  std::int64_t first = 0;
  std::int64_t second = 0;
  friend auto operator<=>(const Rank&, const Rank&) = default;
};

Rank rank_of(const FlowTree& ft);

}  // namespace cbound
