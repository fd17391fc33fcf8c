#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "casetree/tree.hpp"

namespace casetree {

// The synthetic depth-0 parent of every top-level node. Lets root
// identification be scored like any other triplet.
inline constexpr std::string_view kRootToken = "[root]";

/// A triplet endpoint: either the [root] dummy or an entity surface.
struct Endpoint {
  bool is_root = false;
  std::string surface;

  static Endpoint root() { return {true, std::string(kRootToken)}; }
  static Endpoint entity(std::string s) { return {false, std::move(s)}; }

  bool operator==(const Endpoint&) const = default;
};

/// One evaluation unit. Depth is the head-side entity depth: a parent_of
/// triplet carries its parent entity's depth, a modifier triplet the owning
/// head entity's depth; [root] sits at depth 0 and root heads at depth 1.
/// The history flags mirror the H: prefix of the nodes the endpoints head.
struct Triplet {
  Endpoint head;
  RelationType relation = RelationType::parent_of;
  std::string tail;
  int depth = 0;
  bool head_history = false;
  bool tail_history = false;
  int source_node = 0;  // index of the contributing node in depth-first order

  bool operator==(const Triplet&) const = default;
};

struct TripletSet {
  std::vector<Triplet> triplets;
  std::string case_id;

  bool operator==(const TripletSet&) const = default;
};

namespace detail {

struct DecomposeWalker {
  std::vector<Triplet>* out;
  int next_index = 0;

  void walk(const Node& node, const Endpoint& parent, int parent_depth,
            bool parent_history) {
    const int index = next_index++;
    const int head_depth = parent_depth + 1;
    out->push_back({parent, RelationType::parent_of, node.head.surface,
                    parent_depth, parent_history, node.history, index});
    for (const auto& m : node.modifiers) {
      out->push_back({Endpoint::entity(node.head.surface), m.relation,
                      m.value.surface, head_depth, node.history, false, index});
      for (const auto& nm : m.nested) {
        out->push_back({Endpoint::entity(m.value.surface), nm.relation,
                        nm.value.surface, head_depth, false, false, index});
      }
    }
    for (const auto& child : node.children) {
      walk(child, Endpoint::entity(node.head.surface), head_depth, node.history);
    }
  }
};

}  // namespace detail

/// Flattens a forest into depth-annotated triplets in depth-first order:
/// each node contributes one parent_of triplet (via [root] for top-level
/// nodes) followed by one triplet per modifier, nested entries right after
/// their owner at the same depth.
inline TripletSet decompose(const CausalForest& forest) {
  TripletSet set;
  set.case_id = forest.case_id;
  detail::DecomposeWalker walker{&set.triplets};
  for (const auto& root : forest.roots) {
    walker.walk(root, Endpoint::root(), 0, false);
  }
  return set;
}

/// The [root]-headed triplets only, order preserved. Scoring these alone
/// measures primary-disease identification.
inline TripletSet root_triplets(const TripletSet& set) {
  TripletSet out;
  out.case_id = set.case_id;
  for (const auto& t : set.triplets) {
    if (t.head.is_root) out.triplets.push_back(t);
  }
  return out;
}

/// Corpus-level counts. Triplet totals are reported both with and without
/// the [root] dummy triplets.
struct StatsReport {
  size_t cases = 0;
  size_t nodes = 0;
  size_t roots = 0;
  size_t triplets = 0;                 // including [root] parent_of triplets
  size_t triplets_excluding_root = 0;  // the same minus one per root node
  std::array<size_t, 5> relation_counts{};  // indexed by RelationType
  std::map<int, size_t> depth_histogram;

  size_t relation_count(RelationType r) const {
    return relation_counts[static_cast<size_t>(r)];
  }
};

inline StatsReport forest_stats(std::span<const CausalForest> corpus) {
  StatsReport report;
  report.cases = corpus.size();
  for (const auto& forest : corpus) {
    report.nodes += node_count(forest);
    report.roots += forest.roots.size();
    TripletSet set = decompose(forest);
    for (const auto& t : set.triplets) {
      ++report.triplets;
      if (!t.head.is_root) ++report.triplets_excluding_root;
      ++report.relation_counts[static_cast<size_t>(t.relation)];
      ++report.depth_histogram[t.depth];
    }
  }
  return report;
}

}  // namespace casetree
