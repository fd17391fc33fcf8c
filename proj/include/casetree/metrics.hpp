#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casetree/error.hpp"
#include "casetree/match.hpp"
#include "casetree/triplets.hpp"

namespace casetree {

// Triplet weighting. Clinicians weigh shallow layers and causal links over
// deep layers and modifiers, so both weighted methods decay with the triplet
// depth d and discount non-parent_of relations:
//   reciprocal:  w = x / (1 + C*d)   with x = 1 for parent_of, 1/2 otherwise
//   exponential: w = x / C^d         with x = 1 for parent_of, 1/C otherwise
// C defaults to 2, the setting with the best human-score correlation.
enum class WeightMethod { none, reciprocal, exponential };

struct WeightScheme {
  WeightMethod method = WeightMethod::reciprocal;
  double C = 2.0;
};

inline const char* weight_method_name(WeightMethod m) {
  switch (m) {
    case WeightMethod::none:        return "none";
    case WeightMethod::reciprocal:  return "reciprocal";
    case WeightMethod::exponential: return "exponential";
  }
  return "?";
}

inline std::optional<WeightMethod> weight_method_from_name(std::string_view name) {
  if (name == "none")        return WeightMethod::none;
  if (name == "reciprocal")  return WeightMethod::reciprocal;
  if (name == "exponential") return WeightMethod::exponential;
  return std::nullopt;
}

inline double triplet_weight(const Triplet& t, const WeightScheme& s) {
  if (s.method == WeightMethod::none) return 1.0;
  if (s.C <= 0.0) throw Error(ErrorKind::contract, "weighting constant C must be > 0");
  bool causal = t.relation == RelationType::parent_of;
  if (s.method == WeightMethod::reciprocal) {
    return (causal ? 1.0 : 0.5) / (1.0 + s.C * t.depth);
  }
  return (causal ? 1.0 : 1.0 / s.C) / std::pow(s.C, t.depth);
}

/// Per-case scores. Precision uses prediction-side weights, recall gold-side
/// weights; with method none both reduce to plain counts. An empty side
/// scores 0 and raises the matching flag instead of erroring.
struct CaseScore {
  std::string case_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double matched_weight_pred = 0.0;
  double total_weight_pred = 0.0;
  double matched_weight_gold = 0.0;
  double total_weight_gold = 0.0;
  int matched_count = 0;
  int pred_count = 0;
  int gold_count = 0;
  bool empty_pred = false;
  bool empty_gold = false;
};

namespace detail {

inline double safe_div(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

inline double harmonic_f1(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace detail

/// Scores one case from an alignment produced for exactly these two sets.
inline CaseScore score_case(const TripletSet& pred, const TripletSet& gold,
                            const Alignment& alignment, const WeightScheme& scheme) {
  const size_t np = pred.triplets.size();
  const size_t ng = gold.triplets.size();
  if (alignment.pairs.size() + alignment.unmatched_pred.size() != np ||
      alignment.pairs.size() + alignment.unmatched_gold.size() != ng) {
    throw Error(ErrorKind::contract,
                "alignment does not partition the triplet sets");
  }

  CaseScore score;
  score.case_id = gold.case_id.empty() ? pred.case_id : gold.case_id;
  score.pred_count = static_cast<int>(np);
  score.gold_count = static_cast<int>(ng);
  score.matched_count = static_cast<int>(alignment.pairs.size());
  score.empty_pred = np == 0;
  score.empty_gold = ng == 0;

  for (const auto& t : pred.triplets) score.total_weight_pred += triplet_weight(t, scheme);
  for (const auto& t : gold.triplets) score.total_weight_gold += triplet_weight(t, scheme);
  for (const auto& pair : alignment.pairs) {
    if (pair.pred_index < 0 || pair.pred_index >= static_cast<int>(np) ||
        pair.gold_index < 0 || pair.gold_index >= static_cast<int>(ng)) {
      throw Error(ErrorKind::contract, "alignment index out of range");
    }
    score.matched_weight_pred +=
        triplet_weight(pred.triplets[pair.pred_index], scheme);
    score.matched_weight_gold +=
        triplet_weight(gold.triplets[pair.gold_index], scheme);
  }

  score.precision = detail::safe_div(score.matched_weight_pred, score.total_weight_pred);
  score.recall = detail::safe_div(score.matched_weight_gold, score.total_weight_gold);
  score.f1 = detail::harmonic_f1(score.precision, score.recall);
  return score;
}

/// Corpus aggregate: micro sums weight numerators and denominators across
/// cases before dividing; macro averages the per-case scores.
struct CorpusScore {
  CaseScore micro;
  struct Macro {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
  } macro;
  std::vector<CaseScore> per_case;
};

struct CasePair {
  TripletSet pred;
  TripletSet gold;
};

/// Folds per-case scores into micro and macro aggregates; per-case entries
/// are kept in their input order.
inline CorpusScore aggregate_cases(std::vector<CaseScore> per_case) {
  CorpusScore out;
  for (const auto& c : per_case) {
    out.micro.matched_weight_pred += c.matched_weight_pred;
    out.micro.total_weight_pred += c.total_weight_pred;
    out.micro.matched_weight_gold += c.matched_weight_gold;
    out.micro.total_weight_gold += c.total_weight_gold;
    out.micro.matched_count += c.matched_count;
    out.micro.pred_count += c.pred_count;
    out.micro.gold_count += c.gold_count;
    out.macro.precision += c.precision;
    out.macro.recall += c.recall;
    out.macro.f1 += c.f1;
  }
  out.micro.precision =
      detail::safe_div(out.micro.matched_weight_pred, out.micro.total_weight_pred);
  out.micro.recall =
      detail::safe_div(out.micro.matched_weight_gold, out.micro.total_weight_gold);
  out.micro.f1 = detail::harmonic_f1(out.micro.precision, out.micro.recall);
  out.micro.empty_pred = out.micro.pred_count == 0;
  out.micro.empty_gold = out.micro.gold_count == 0;
  if (!per_case.empty()) {
    out.macro.precision /= per_case.size();
    out.macro.recall /= per_case.size();
    out.macro.f1 /= per_case.size();
  }
  out.per_case = std::move(per_case);
  return out;
}

/// Aligns and scores every (pred, gold) pair. Pairs must share case_ids and
/// ids must be unique; root_only restricts both sides to [root] triplets
/// before alignment.
inline CorpusScore score_corpus(std::span<const CasePair> cases,
                                const MatchConfig& cfg, const WeightScheme& scheme,
                                bool root_only = false) {
  std::unordered_map<std::string, int> seen;
  std::vector<CaseScore> per_case;
  per_case.reserve(cases.size());
  for (const auto& pair : cases) {
    if (!pair.pred.case_id.empty() && pair.pred.case_id != pair.gold.case_id) {
      throw Error(ErrorKind::data, "case id mismatch: prediction '" +
                                       pair.pred.case_id + "' vs gold '" +
                                       pair.gold.case_id + "'");
    }
    if (++seen[pair.gold.case_id] > 1) {
      throw Error(ErrorKind::data, "duplicate case id: " + pair.gold.case_id);
    }
    if (root_only) {
      TripletSet p = root_triplets(pair.pred);
      TripletSet g = root_triplets(pair.gold);
      per_case.push_back(score_case(p, g, align(p, g, cfg), scheme));
    } else {
      per_case.push_back(
          score_case(pair.pred, pair.gold, align(pair.pred, pair.gold, cfg), scheme));
    }
  }
  return aggregate_cases(std::move(per_case));
}

/// Sample Pearson correlation coefficient.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorKind::length_mismatch,
                "vectors differ in length: " + std::to_string(xs.size()) +
                    " vs " + std::to_string(ys.size()));
  }
  if (xs.size() < 2) {
    throw Error(ErrorKind::length_mismatch,
                "correlation needs at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::constant_input,
                "correlation is undefined for a constant vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {

// Average ranks, ties sharing the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

/// Spearman rank correlation (average ranks for ties).
inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorKind::length_mismatch,
                "vectors differ in length: " + std::to_string(xs.size()) +
                    " vs " + std::to_string(ys.size()));
  }
  std::vector<double> rx = detail::average_ranks(xs);
  std::vector<double> ry = detail::average_ranks(ys);
  return pearson(rx, ry);
}

/// A manual evaluation score on the 0..100 scale.
struct ManualScore {
  std::string case_id;
  double score = 0.0;
};

struct SweepCell {
  WeightMethod method = WeightMethod::none;
  double C = 0.0;  // 0 for the unweighted baseline
  double correlation = 0.0;
};

struct SweepTable {
  std::vector<SweepCell> cells;  // sorted by correlation, best first
};

/// Correlates per-case weighted F1 with manual scores over a grid of
/// weighting settings. Alignments are computed once per case and reused
/// across cells (weights never affect matching); the unweighted baseline is
/// always included. Cells whose F1 vector is constant get a NaN correlation
/// and sort last.
inline SweepTable sweep(std::span<const CasePair> cases,
                        std::span<const ManualScore> manual,
                        const MatchConfig& cfg,
                        std::span<const WeightMethod> methods,
                        std::span<const double> Cs) {
  std::unordered_map<std::string, double> manual_by_id;
  for (const auto& m : manual) manual_by_id[m.case_id] = m.score;

  std::string missing;
  std::vector<double> manual_vec;
  manual_vec.reserve(cases.size());
  for (const auto& pair : cases) {
    auto it = manual_by_id.find(pair.gold.case_id);
    if (it == manual_by_id.end()) {
      if (!missing.empty()) missing += ", ";
      missing += pair.gold.case_id;
    } else {
      manual_vec.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::data, "cases without a manual score: " + missing);
  }

  std::vector<Alignment> alignments;
  alignments.reserve(cases.size());
  for (const auto& pair : cases) {
    alignments.push_back(align(pair.pred, pair.gold, cfg));
  }

  auto cell_correlation = [&](const WeightScheme& scheme) {
    std::vector<double> f1;
    f1.reserve(cases.size());
    for (size_t i = 0; i < cases.size(); ++i) {
      f1.push_back(
          score_case(cases[i].pred, cases[i].gold, alignments[i], scheme).f1);
    }
    try {
      return pearson(f1, manual_vec);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::constant_input)
        return std::numeric_limits<double>::quiet_NaN();
      throw;
    }
  };

  SweepTable table;
  table.cells.push_back({WeightMethod::none, 0.0,
                         cell_correlation({WeightMethod::none, 1.0})});
  for (WeightMethod method : methods) {
    if (method == WeightMethod::none) continue;  // baseline already present
    for (double c : Cs) {
      table.cells.push_back({method, c, cell_correlation({method, c})});
    }
  }

  std::sort(table.cells.begin(), table.cells.end(),
            [](const SweepCell& a, const SweepCell& b) {
              bool an = std::isnan(a.correlation), bn = std::isnan(b.correlation);
              if (an != bn) return bn;  // NaN cells last
              if (!an && a.correlation != b.correlation)
                return a.correlation > b.correlation;
              if (a.method != b.method)
                return static_cast<int>(a.method) < static_cast<int>(b.method);
              return a.C < b.C;
            });
  return table;
}

}  // namespace casetree
