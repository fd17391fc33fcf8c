#pragma once

#include <string>

#include "casetree/tree.hpp"

namespace casetree {

struct SerializeOptions {
  std::string indent_unit = "  ";  // two spaces; "\t" also round-trips
};

namespace detail {

// A group is the featured chain in front of its head: "f1 ＊ f2 ＊ head".
inline void append_group(std::string& out, const std::vector<Modifier>& featured,
                         const Entity& head) {
  for (const auto& f : featured) {
    out += f.value.surface;
    out += " ＊ ";
  }
  out += head.surface;
}

}  // namespace detail

/// Canonical text of one node, without indentation.
inline std::string serialize_node_line(const Node& node) {
  std::string out;
  if (node.history) out += "H:";

  const Modifier* tested = nullptr;
  for (const auto& m : node.modifiers) {
    if (m.relation == RelationType::tested) {
      tested = &m;
      break;
    }
  }
  if (tested) {
    detail::append_group(out, tested->nested, tested->value);
    out += " = ";
  }

  std::vector<Modifier> head_featured;
  for (const auto& m : node.modifiers) {
    if (m.relation == RelationType::featured) head_featured.push_back(m);
  }
  detail::append_group(out, head_featured, node.head);

  for (const auto& m : node.modifiers) {
    if (m.relation == RelationType::located) {
      out += " @ ";
      detail::append_group(out, m.nested, m.value);
    } else if (m.relation == RelationType::polarity) {
      out += " / ";
      out += m.value.surface;
    }
  }
  return out;
}

namespace detail {

inline void serialize_node(std::string& out, const Node& node, int level,
                           const std::string& unit) {
  for (int i = 0; i < level; ++i) out += unit;
  out += serialize_node_line(node);
  out += '\n';
  for (const auto& child : node.children) {
    serialize_node(out, child, level + 1, unit);
  }
}

}  // namespace detail

/// Depth-first canonical text form; parsing it back yields an equal forest.
inline std::string serialize_forest(const CausalForest& forest,
                                    const SerializeOptions& options = {}) {
  std::string out;
  for (const auto& root : forest.roots) {
    detail::serialize_node(out, root, 0, options.indent_unit);
  }
  return out;
}

}  // namespace casetree
