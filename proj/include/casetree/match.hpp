#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "casetree/thesaurus.hpp"
#include "casetree/triplets.hpp"
#include "casetree/unicode.hpp"

namespace casetree {

/// Entity comparison settings. The edit-distance ratio normalizes by the
/// gold-side length, counted in Unicode code points, and the threshold test
/// is strict less-than unless inclusive_threshold is set.
struct MatchConfig {
  double threshold = 0.5;
  bool polarity_exact = true;      // polarity values never match fuzzily
  bool unicode_normalize = true;   // compatibility fold before lookup
  bool inclusive_threshold = false;
  const Thesaurus* thesaurus = nullptr;
};

/// Edit-distance character unit; ratios are distance / gold length in these.
inline constexpr std::string_view kEditDistanceUnit = "codepoint";

/// Canonical comparison form: compatibility fold, then thesaurus lookup.
inline std::string normalize(std::string_view surface, const MatchConfig& cfg) {
  std::string s = cfg.unicode_normalize ? compat_fold_utf8(surface)
                                        : std::string(surface);
  return cfg.thesaurus ? cfg.thesaurus->lookup(s) : s;
}

/// Levenshtein distance over code points (unit insert/delete/substitute).
inline size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

inline size_t edit_distance_utf8(std::string_view a, std::string_view b) {
  auto ca = decode_utf8(a);
  auto cb = decode_utf8(b);
  if (!ca || !cb) {
    // Fall back to bytes on malformed input; parsed entities are always valid.
    std::u32string ba(a.begin(), a.end()), bb(b.begin(), b.end());
    return edit_distance(ba, bb);
  }
  return edit_distance(*ca, *cb);
}

struct MatchResult {
  bool matched = false;
  double ratio = 0.0;  // edit distance / gold length, after normalization
};

/// Fuzzy entity comparison. Both sides are normalized first; the ratio
/// divides by the gold length, so the relation is not symmetric. Polarity
/// values require canonical equality.
inline MatchResult entity_match(std::string_view pred, std::string_view gold,
                                const MatchConfig& cfg,
                                bool is_polarity_value = false) {
  std::string pred_c = normalize(pred, cfg);
  std::string gold_c = normalize(gold, cfg);

  size_t gold_len = codepoint_length(gold_c);
  size_t dist = edit_distance_utf8(pred_c, gold_c);
  double ratio = gold_len == 0 ? (pred_c.empty() ? 0.0 : 1.0)
                               : static_cast<double>(dist) / gold_len;

  bool matched;
  if (is_polarity_value && cfg.polarity_exact) {
    matched = pred_c == gold_c;
  } else {
    matched = cfg.inclusive_threshold ? ratio <= cfg.threshold
                                      : ratio < cfg.threshold;
  }
  return {matched, ratio};
}

/// Endpoint comparison: [root] matches only [root]; entity surfaces match
/// by entity_match.
inline MatchResult endpoint_match(const Endpoint& pred, const Endpoint& gold,
                                  const MatchConfig& cfg) {
  if (pred.is_root || gold.is_root) {
    return {pred.is_root && gold.is_root, 0.0};
  }
  return entity_match(pred.surface, gold.surface, cfg);
}

struct TripletMatch {
  bool matched = false;
  double cost = 0.0;  // head ratio + tail ratio; 0 when both sides are exact
};

/// Triplets match when the relation types agree, both endpoints match
/// (polarity tails exactly), and the head history flags are equal. Depth is
/// never compared; it only enters the weighting.
inline TripletMatch triplet_match(const Triplet& pred, const Triplet& gold,
                                  const MatchConfig& cfg) {
  if (pred.relation != gold.relation) return {false, 0.0};
  if (pred.head_history != gold.head_history) return {false, 0.0};
  MatchResult head = endpoint_match(pred.head, gold.head, cfg);
  if (!head.matched) return {false, 0.0};
  MatchResult tail = entity_match(pred.tail, gold.tail, cfg,
                                  gold.relation == RelationType::polarity);
  if (!tail.matched) return {false, 0.0};
  return {true, head.ratio + tail.ratio};
}

struct AlignedPair {
  int pred_index = 0;
  int gold_index = 0;
  double cost = 0.0;
};

/// One-to-one assignment between prediction and gold triplets. The pairs
/// and the unmatched lists partition both sides.
struct Alignment {
  std::vector<AlignedPair> pairs;
  std::vector<int> unmatched_pred;
  std::vector<int> unmatched_gold;
};

namespace detail {

// Pre-normalized view of a triplet set, so alignment does one fold and one
// thesaurus lookup per entity instead of one per candidate pair.
struct CanonicalTriplets {
  std::vector<std::u32string> head;
  std::vector<bool> head_is_root;
  std::vector<std::u32string> tail;
  std::vector<size_t> tail_len;
  std::vector<RelationType> relation;
  std::vector<bool> head_history;

  CanonicalTriplets(const TripletSet& set, const MatchConfig& cfg) {
    const size_t n = set.triplets.size();
    head.reserve(n);
    head_is_root.reserve(n);
    tail.reserve(n);
    tail_len.reserve(n);
    relation.reserve(n);
    head_history.reserve(n);
    for (const auto& t : set.triplets) {
      std::string h = t.head.is_root ? std::string(kRootToken)
                                     : normalize(t.head.surface, cfg);
      std::string tl = normalize(t.tail, cfg);
      auto hc = decode_utf8(h);
      auto tc = decode_utf8(tl);
      head.push_back(hc ? *hc : std::u32string(h.begin(), h.end()));
      tail.push_back(tc ? *tc : std::u32string(tl.begin(), tl.end()));
      tail_len.push_back(tail.back().size());
      head_is_root.push_back(t.head.is_root);
      relation.push_back(t.relation);
      head_history.push_back(t.head_history);
    }
  }
};

}  // namespace detail

/// Greedy one-to-one alignment: all matching pairs are ranked by ascending
/// cost (ties by prediction index, then gold index) and accepted while both
/// endpoints are unused. Deterministic for fixed inputs; equals the optimal
/// assignment whenever every match is exact.
inline Alignment align(const TripletSet& pred, const TripletSet& gold,
                       const MatchConfig& cfg) {
  detail::CanonicalTriplets p(pred, cfg);
  detail::CanonicalTriplets g(gold, cfg);
  const size_t np = pred.triplets.size();
  const size_t ng = gold.triplets.size();

  std::vector<AlignedPair> candidates;
  for (size_t i = 0; i < np; ++i) {
    for (size_t j = 0; j < ng; ++j) {
      if (p.relation[i] != g.relation[j]) continue;
      if (p.head_history[i] != g.head_history[j]) continue;
      if (p.head_is_root[i] != g.head_is_root[j]) continue;

      double head_ratio = 0.0;
      if (!p.head_is_root[i]) {
        size_t len = g.head[j].size();
        size_t dist = edit_distance(p.head[i], g.head[j]);
        head_ratio = len == 0 ? (p.head[i].empty() ? 0.0 : 1.0)
                              : static_cast<double>(dist) / len;
        bool ok = cfg.inclusive_threshold ? head_ratio <= cfg.threshold
                                          : head_ratio < cfg.threshold;
        if (!ok) continue;
      }

      double tail_ratio;
      if (g.relation[j] == RelationType::polarity && cfg.polarity_exact) {
        if (p.tail[i] != g.tail[j]) continue;
        tail_ratio = 0.0;
      } else {
        size_t len = g.tail_len[j];
        size_t dist = edit_distance(p.tail[i], g.tail[j]);
        tail_ratio = len == 0 ? (p.tail[i].empty() ? 0.0 : 1.0)
                              : static_cast<double>(dist) / len;
        bool ok = cfg.inclusive_threshold ? tail_ratio <= cfg.threshold
                                          : tail_ratio < cfg.threshold;
        if (!ok) continue;
      }
      candidates.push_back({static_cast<int>(i), static_cast<int>(j),
                            head_ratio + tail_ratio});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const AlignedPair& a, const AlignedPair& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              if (a.pred_index != b.pred_index) return a.pred_index < b.pred_index;
              return a.gold_index < b.gold_index;
            });

  Alignment result;
  std::vector<bool> pred_used(np, false), gold_used(ng, false);
  for (const auto& c : candidates) {
    if (pred_used[c.pred_index] || gold_used[c.gold_index]) continue;
    pred_used[c.pred_index] = true;
    gold_used[c.gold_index] = true;
    result.pairs.push_back(c);
  }
  for (size_t i = 0; i < np; ++i)
    if (!pred_used[i]) result.unmatched_pred.push_back(static_cast<int>(i));
  for (size_t j = 0; j < ng; ++j)
    if (!gold_used[j]) result.unmatched_gold.push_back(static_cast<int>(j));
  return result;
}

}  // namespace casetree
