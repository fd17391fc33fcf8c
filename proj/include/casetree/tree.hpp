#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casetree {

// Relations between entities. parent_of links nodes across tree levels; the
// other four are intra-node modifier relations with fixed text operators:
// located @, polarity /, tested =, featured ＊.
enum class RelationType { parent_of, located, polarity, tested, featured };

inline const char* relation_name(RelationType r) {
  switch (r) {
    case RelationType::parent_of: return "parent_of";
    case RelationType::located:   return "located";
    case RelationType::polarity:  return "polarity";
    case RelationType::tested:    return "tested";
    case RelationType::featured:  return "featured";
  }
  return "?";
}

inline std::optional<RelationType> relation_from_name(std::string_view name) {
  if (name == "parent_of") return RelationType::parent_of;
  if (name == "located")   return RelationType::located;
  if (name == "polarity")  return RelationType::polarity;
  if (name == "tested")    return RelationType::tested;
  if (name == "featured")  return RelationType::featured;
  return std::nullopt;
}

/// A medical entity surface form. Trimmed, non-empty, and free of the
/// reserved operator symbols (@ / = ＊ and the halfwidth * alias).
struct Entity {
  std::string surface;

  bool operator==(const Entity&) const = default;
};

/// An intra-node modification. `nested` holds refinements of the value
/// produced by ＊ chains ("右 ＊ 大脳半球" puts featured 右 under 大脳半球);
/// polarity values are atomic and never carry nested modifiers.
struct Modifier {
  RelationType relation = RelationType::located;
  Entity value;
  std::vector<Modifier> nested;

  bool operator==(const Modifier&) const = default;
};

/// One line of the text form: a head entity plus its modifiers and children.
/// Canonical modifier order is tested first (at most one), then the head
/// group's featured entries, then located/polarity in source order. A head
/// surface may begin with "H:" only on history nodes, otherwise the text
/// form cannot represent it.
struct Node {
  Entity head;
  bool history = false;  // the H: prefix: medical history or treatment
  std::vector<Modifier> modifiers;
  std::vector<Node> children;

  bool operator==(const Node&) const = default;
};

/// All causal trees of one case, roots in source order. A case usually has a
/// single root (the primary disease) but multiple roots are permitted.
struct CausalForest {
  std::vector<Node> roots;
  std::string case_id;

  bool operator==(const CausalForest&) const = default;
};

inline size_t node_count(const Node& node) {
  size_t n = 1;
  for (const auto& c : node.children) n += node_count(c);
  return n;
}

inline size_t node_count(const CausalForest& forest) {
  size_t n = 0;
  for (const auto& r : forest.roots) n += node_count(r);
  return n;
}

inline size_t modifier_count(const Modifier& m) {
  size_t n = 1;
  for (const auto& nm : m.nested) n += modifier_count(nm);
  return n;
}

/// Modifiers in a node subtree, nested entries included.
inline size_t modifier_count(const Node& node) {
  size_t n = 0;
  for (const auto& m : node.modifiers) n += modifier_count(m);
  for (const auto& c : node.children) n += modifier_count(c);
  return n;
}

inline size_t modifier_count(const CausalForest& forest) {
  size_t n = 0;
  for (const auto& r : forest.roots) n += modifier_count(r);
  return n;
}

}  // namespace casetree
