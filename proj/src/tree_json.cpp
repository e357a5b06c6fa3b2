#include "cbound/tree_json.hpp"

#include <sstream>

#include "cbound/error.hpp"
#include "cbound/gvas_text.hpp"

namespace cbound {

using nlohmann::json;

namespace {

json sym_json(const Grammar& g, const Symbol& s) {
  switch (s.kind) {
    case Symbol::Kind::Nonterminal: return g.name(s.nt());
    case Symbol::Kind::Action: return s.value;
    case Symbol::Kind::Epsilon: break;
  }
  return "ε";
}

Symbol sym_from_json(const Grammar& g, const json& j) {
  if (j.is_number_integer()) return Symbol::action(j.get<std::int64_t>());
  if (!j.is_string()) throw Error("tree node 'sym' must be a string or an integer");
  const auto s = j.get<std::string>();
  if (s == "ε" || s == "eps") return Symbol::epsilon();
  std::int64_t v = 0;
  if (text_detail::parse_int(s, v)) return Symbol::action(v);
  return Symbol::nonterminal(g.at(s));
}

ExtNat ext_from_json(const json& j, const char* field) {
  if (j.is_string() && j.get<std::string>() == "-inf") return ExtNat::bottom();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return ExtNat(j.get<std::int64_t>());
  throw Error(std::string("tree node '") + field + "' must be a natural number or \"-inf\"");
}

void dot_node(const Grammar& g, const FlowNode& t, NodePath& path, const std::optional<NodePath>& s,
              const std::optional<NodePath>& mt, std::ostringstream& out, std::size_t& counter) {
  const auto id = counter++;
  const auto sym = sym_json(g, t.label);
  std::string label = sym.is_string() ? sym.get<std::string>() : sym.dump();
  label += "\\n" + t.in.to_string() + " / " + t.out.to_string();
  std::string style;
  if (s && *s == path) style = ", style=filled, fillcolor=lightblue";
  if (mt && *mt == path) style = ", style=filled, fillcolor=orange";
  std::string escaped;
  for (char ch : label) {
    if (ch == '"') escaped += '\\';
    escaped += ch;
  }
  out << "  n" << id << " [label=\"" << escaped << "\"" << style << "];\n";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    out << "  n" << id << " -> n" << counter << ";\n";
    path.push_back(i);
    dot_node(g, t.children[i], path, s, mt, out, counter);
    path.pop_back();
  }
}

}  // namespace

json to_json(ExtNat v) {
  if (v.is_bottom()) return "-inf";
  return v.value();
}

json to_json(const NodePath& p) {
  json a = json::array();
  for (auto i : p) a.push_back(i);
  return a;
}

json to_json(const Grammar& g, const ParseTree& t) {
  json j;
  j["sym"] = sym_json(g, t.label);
  j["children"] = json::array();
  for (const auto& c : t.children) j["children"].push_back(to_json(g, c));
  return j;
}

json to_json(const Grammar& g, const FlowNode& t) {
  json j;
  j["sym"] = sym_json(g, t.label);
  j["in"] = to_json(t.in);
  j["out"] = to_json(t.out);
  j["children"] = json::array();
  for (const auto& c : t.children) j["children"].push_back(to_json(g, c));
  return j;
}

FlowNode flow_from_json(const Grammar& g, const json& j) {
  if (!j.is_object() || !j.contains("sym")) throw Error("tree node must be an object with a 'sym' field");
  FlowNode n;
  n.label = sym_from_json(g, j["sym"]);
  if (j.contains("in")) n.in = ext_from_json(j["in"], "in");
  if (j.contains("out")) n.out = ext_from_json(j["out"], "out");
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw Error("tree node 'children' must be an array");
    for (const auto& c : j["children"]) n.children.push_back(flow_from_json(g, c));
  }
  return n;
}

NodePath path_from_json(const json& j) {
  if (j.is_string()) return path_from_string(j.get<std::string>());
  if (!j.is_array()) throw Error("node path must be an array of child indices");
  NodePath p;
  for (const auto& e : j) {
    if (!e.is_number_unsigned()) throw Error("node path entries must be natural numbers");
    p.push_back(e.get<std::size_t>());
  }
  return p;
}

TreeDocument parse_tree_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  TreeDocument doc;
  if (j.is_object() && j.contains("tree")) {
    doc.tree = j["tree"];
    if (j.contains("gvas")) {
      if (!j["gvas"].is_string()) throw Error("'gvas' must be a string holding GVAS text");
      doc.gvas = j["gvas"].get<std::string>();
    }
    if (j.contains("s")) doc.s = path_from_json(j["s"]);
    if (j.contains("t")) doc.t = path_from_json(j["t"]);
  } else {
    doc.tree = j;
  }
  return doc;
}

json certificate_document(const Gvas& g, const Certificate& c) {
  json j;
  j["gvas"] = print_gvas(g);
  j["tree"] = to_json(g.grammar, c.flow);
  j["s"] = to_json(c.s);
  j["t"] = to_json(c.t);
  return j;
}

std::string to_dot(const Grammar& g, const FlowNode& t, const std::optional<NodePath>& s,
                   const std::optional<NodePath>& mark_t) {
  std::ostringstream out;
  out << "digraph flow {\n  node [shape=box, fontname=\"monospace\"];\n";
  NodePath path;
  std::size_t counter = 0;
  dot_node(g, t, path, s, mark_t, out, counter);
  out << "}\n";
  return out.str();
}

}  // namespace cbound
