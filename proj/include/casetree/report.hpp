#pragma once

#include <cstdio>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casetree/diagnostics.hpp"
#include "casetree/metrics.hpp"
#include "casetree/triplets.hpp"

// Report rendering. Every report embeds the effective run configuration so
// each number is reproducible from the report alone, and all formatting is
// fixed so identical inputs render byte-identical output regardless of the
// parallelism used to compute them.

namespace casetree {

enum class OutputFormat { text, records };

struct RunConfig {
  double threshold = 0.5;
  WeightMethod method = WeightMethod::reciprocal;
  double C = 2.0;
  bool root_only = false;
  std::string thesaurus_path;  // empty = none
  bool unicode_normalize = true;
  int jobs = 1;
  OutputFormat format = OutputFormat::text;
};

namespace detail {

inline std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

inline std::string fmt_score(double v) { return fmt("%.4f", v); }

// The echo covers everything that influences the numbers. The worker count
// does not, and must not change report bytes, so it is left out.
inline nlohmann::json config_json(const RunConfig& config) {
  nlohmann::json j;
  j["threshold"] = config.threshold;
  j["weighting"] = weight_method_name(config.method);
  j["C"] = config.C;
  j["root_only"] = config.root_only;
  j["thesaurus"] = config.thesaurus_path.empty()
                       ? nlohmann::json(nullptr)
                       : nlohmann::json(config.thesaurus_path);
  j["unicode_normalize"] = config.unicode_normalize;
  return j;
}

inline std::string config_text(const RunConfig& config) {
  std::string out = "threshold=" + fmt("%g", config.threshold);
  out += "  weighting=";
  out += weight_method_name(config.method);
  if (config.method != WeightMethod::none) out += "  C=" + fmt("%g", config.C);
  out += std::string("  root_only=") + (config.root_only ? "true" : "false");
  out += std::string("  unicode_normalize=") +
         (config.unicode_normalize ? "true" : "false");
  out += "  thesaurus=" +
         (config.thesaurus_path.empty() ? std::string("(none)")
                                        : config.thesaurus_path);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// score reports

struct CaseReportFlags {
  bool pred_missing = false;  // gold case had no prediction
  bool pred_invalid = false;  // prediction failed to parse, scored as empty
};

struct ScoreReport {
  RunConfig config;
  CorpusScore weighted;    // under config.method / config.C
  CorpusScore unweighted;  // always reported alongside
  std::vector<CaseReportFlags> case_flags;  // aligned with per_case entries
};

inline std::string render_score_json(const ScoreReport& report) {
  nlohmann::json j;
  j["report"] = "score";
  j["config"] = detail::config_json(report.config);
  auto block = [](const CorpusScore& s) {
    nlohmann::json b;
    b["micro"] = {{"precision", s.micro.precision},
                  {"recall", s.micro.recall},
                  {"f1", s.micro.f1}};
    b["macro"] = {{"precision", s.macro.precision},
                  {"recall", s.macro.recall},
                  {"f1", s.macro.f1}};
    return b;
  };
  j["weighted"] = block(report.weighted);
  j["unweighted"] = block(report.unweighted);
  j["cases"] = nlohmann::json::array();
  for (size_t i = 0; i < report.weighted.per_case.size(); ++i) {
    const CaseScore& w = report.weighted.per_case[i];
    const CaseScore& u = report.unweighted.per_case[i];
    nlohmann::json c;
    c["case_id"] = w.case_id;
    c["weighted"] = {{"precision", w.precision},
                     {"recall", w.recall},
                     {"f1", w.f1},
                     {"matched_weight_pred", w.matched_weight_pred},
                     {"total_weight_pred", w.total_weight_pred},
                     {"matched_weight_gold", w.matched_weight_gold},
                     {"total_weight_gold", w.total_weight_gold}};
    c["unweighted"] = {{"precision", u.precision},
                       {"recall", u.recall},
                       {"f1", u.f1}};
    c["matched"] = u.matched_count;
    c["pred_triplets"] = u.pred_count;
    c["gold_triplets"] = u.gold_count;
    c["empty_pred"] = u.empty_pred;
    c["empty_gold"] = u.empty_gold;
    if (i < report.case_flags.size()) {
      c["pred_missing"] = report.case_flags[i].pred_missing;
      c["pred_invalid"] = report.case_flags[i].pred_invalid;
    }
    j["cases"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

inline std::string render_score_text(const ScoreReport& report) {
  std::string out = "== score report ==\n";
  out += detail::config_text(report.config) + "\n\n";
  out += "                    P       R       F1\n";
  auto row = [&](const char* label, double p, double r, double f1) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-16s %.4f  %.4f  %.4f\n", label, p, r, f1);
    out += buf;
  };
  row("weighted/micro", report.weighted.micro.precision,
      report.weighted.micro.recall, report.weighted.micro.f1);
  row("weighted/macro", report.weighted.macro.precision,
      report.weighted.macro.recall, report.weighted.macro.f1);
  row("unweighted/micro", report.unweighted.micro.precision,
      report.unweighted.micro.recall, report.unweighted.micro.f1);
  row("unweighted/macro", report.unweighted.macro.precision,
      report.unweighted.macro.recall, report.unweighted.macro.f1);
  out += "\ncase_id\twP\twR\twF1\tuP\tuR\tuF1\tmatched\tpred\tgold\tnotes\n";
  for (size_t i = 0; i < report.weighted.per_case.size(); ++i) {
    const CaseScore& w = report.weighted.per_case[i];
    const CaseScore& u = report.unweighted.per_case[i];
    out += w.case_id;
    for (double v : {w.precision, w.recall, w.f1, u.precision, u.recall, u.f1}) {
      out += '\t';
      out += detail::fmt_score(v);
    }
    out += '\t' + std::to_string(u.matched_count);
    out += '\t' + std::to_string(u.pred_count);
    out += '\t' + std::to_string(u.gold_count);
    std::string notes;
    if (i < report.case_flags.size()) {
      if (report.case_flags[i].pred_missing) notes += "pred_missing";
      if (report.case_flags[i].pred_invalid) {
        if (!notes.empty()) notes += ",";
        notes += "pred_invalid";
      }
    }
    out += '\t' + (notes.empty() ? "-" : notes) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// stats reports

inline std::string render_stats_json(const StatsReport& stats,
                                     const RunConfig& config) {
  nlohmann::json j;
  j["report"] = "stats";
  j["config"] = detail::config_json(config);
  j["cases"] = stats.cases;
  j["nodes"] = stats.nodes;
  j["root_nodes"] = stats.roots;
  j["triplets"] = stats.triplets;
  j["triplets_excluding_root"] = stats.triplets_excluding_root;
  nlohmann::json rel;
  for (RelationType r : {RelationType::parent_of, RelationType::located,
                         RelationType::polarity, RelationType::tested,
                         RelationType::featured}) {
    rel[relation_name(r)] = stats.relation_count(r);
  }
  j["relations"] = std::move(rel);
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [depth, count] : stats.depth_histogram) {
    hist[std::to_string(depth)] = count;
  }
  j["depth_histogram"] = std::move(hist);
  return j.dump(2) + "\n";
}

inline std::string render_stats_text(const StatsReport& stats,
                                     const RunConfig& config) {
  std::string out = "== corpus stats ==\n";
  out += detail::config_text(config) + "\n\n";
  auto line = [&](const char* label, size_t value) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-24s %zu\n", label, value);
    out += buf;
  };
  line("cases", stats.cases);
  line("nodes", stats.nodes);
  line("root_nodes", stats.roots);
  line("triplets", stats.triplets);
  line("triplets_excl_root", stats.triplets_excluding_root);
  for (RelationType r : {RelationType::parent_of, RelationType::located,
                         RelationType::polarity, RelationType::tested,
                         RelationType::featured}) {
    line(relation_name(r), stats.relation_count(r));
  }
  out += "depth histogram:\n";
  for (const auto& [depth, count] : stats.depth_histogram) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "  d%-3d %zu\n", depth, count);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// correlation and sweep reports

struct CorrelationReport {
  RunConfig config;
  double pearson_r = 0.0;
  bool has_spearman = false;
  double spearman_r = 0.0;
  std::vector<std::string> case_ids;
  std::vector<double> f1;      // per-case weighted F1 under config
  std::vector<double> manual;  // paired manual scores
};

inline std::string render_correlation_json(const CorrelationReport& report) {
  nlohmann::json j;
  j["report"] = "correlation";
  j["config"] = detail::config_json(report.config);
  j["n"] = report.case_ids.size();
  j["pearson"] = report.pearson_r;
  if (report.has_spearman) j["spearman"] = report.spearman_r;
  j["cases"] = nlohmann::json::array();
  for (size_t i = 0; i < report.case_ids.size(); ++i) {
    j["cases"].push_back({{"case_id", report.case_ids[i]},
                          {"f1", report.f1[i]},
                          {"manual", report.manual[i]}});
  }
  return j.dump(2) + "\n";
}

inline std::string render_correlation_text(const CorrelationReport& report) {
  std::string out = "== correlation report ==\n";
  out += detail::config_text(report.config) + "\n\n";
  out += "n        " + std::to_string(report.case_ids.size()) + "\n";
  out += "pearson  " + detail::fmt_score(report.pearson_r) + "\n";
  if (report.has_spearman) {
    out += "spearman " + detail::fmt_score(report.spearman_r) + "\n";
  }
  out += "\ncase_id\tf1\tmanual\n";
  for (size_t i = 0; i < report.case_ids.size(); ++i) {
    out += report.case_ids[i] + '\t' + detail::fmt_score(report.f1[i]) + '\t' +
           detail::fmt("%g", report.manual[i]) + '\n';
  }
  return out;
}

inline std::string render_sweep_json(const SweepTable& table,
                                     const RunConfig& config) {
  nlohmann::json j;
  j["report"] = "sweep";
  j["config"] = detail::config_json(config);
  j["cells"] = nlohmann::json::array();
  for (const auto& cell : table.cells) {
    nlohmann::json c;
    c["method"] = weight_method_name(cell.method);
    c["C"] = cell.method == WeightMethod::none ? nlohmann::json(nullptr)
                                               : nlohmann::json(cell.C);
    c["correlation"] = std::isnan(cell.correlation)
                           ? nlohmann::json(nullptr)
                           : nlohmann::json(cell.correlation);
    j["cells"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

inline std::string render_sweep_text(const SweepTable& table,
                                     const RunConfig& config) {
  std::string out = "== weighting sweep ==\n";
  out += detail::config_text(config) + "\n\n";
  out += "method       C        correlation\n";
  for (const auto& cell : table.cells) {
    char buf[96];
    if (cell.method == WeightMethod::none) {
      std::snprintf(buf, sizeof(buf), "%-12s %-8s %s\n", "none", "-",
                    std::isnan(cell.correlation)
                        ? "nan"
                        : detail::fmt_score(cell.correlation).c_str());
    } else {
      std::snprintf(buf, sizeof(buf), "%-12s %-8g %s\n",
                    weight_method_name(cell.method), cell.C,
                    std::isnan(cell.correlation)
                        ? "nan"
                        : detail::fmt_score(cell.correlation).c_str());
    }
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// triplet export

inline constexpr std::string_view kTripletTsvHeader =
    "case_id\thead\trelation\ttail\tdepth\thead_history";

inline std::string triplet_tsv_row(const std::string& case_id, const Triplet& t) {
  std::string out = case_id;
  out += '\t';
  out += t.head.surface;
  out += '\t';
  out += relation_name(t.relation);
  out += '\t';
  out += t.tail;
  out += '\t';
  out += std::to_string(t.depth);
  out += '\t';
  out += t.head_history ? '1' : '0';
  return out;
}

inline std::string triplet_record_line(const std::string& case_id,
                                       const Triplet& t) {
  nlohmann::json j;
  j["case_id"] = case_id;
  j["head"] = t.head.surface;
  j["relation"] = relation_name(t.relation);
  j["tail"] = t.tail;
  j["depth"] = t.depth;
  j["head_history"] = t.head_history;
  return j.dump();
}

/// Reads triplet record lines back; heads equal to "[root]" become the root
/// endpoint.
inline std::vector<std::pair<std::string, Triplet>> read_triplet_records(
    std::istream& in) {
  std::vector<std::pair<std::string, Triplet>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorKind::data,
                  "triplet record " + std::to_string(line_no) + ": not JSON");
    }
    Triplet t;
    std::string head = j.at("head").get<std::string>();
    t.head = head == kRootToken ? Endpoint::root() : Endpoint::entity(head);
    auto rel = relation_from_name(j.at("relation").get<std::string>());
    if (!rel) {
      throw Error(ErrorKind::data, "triplet record " + std::to_string(line_no) +
                                       ": unknown relation");
    }
    t.relation = *rel;
    t.tail = j.at("tail").get<std::string>();
    t.depth = j.at("depth").get<int>();
    t.head_history = j.value("head_history", false);
    out.emplace_back(j.at("case_id").get<std::string>(), std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// alignment dump

inline constexpr std::string_view kAlignmentTsvHeader =
    "case_id\tkind\tpred_index\tgold_index\tcost";

inline std::string alignment_dump_rows(const std::string& case_id,
                                       const Alignment& alignment) {
  std::string out;
  for (const auto& pair : alignment.pairs) {
    out += case_id + "\tpair\t" + std::to_string(pair.pred_index) + '\t' +
           std::to_string(pair.gold_index) + '\t' +
           detail::fmt("%.6f", pair.cost) + '\n';
  }
  for (int i : alignment.unmatched_pred) {
    out += case_id + "\tunmatched_pred\t" + std::to_string(i) + "\t-\t-\n";
  }
  for (int j : alignment.unmatched_gold) {
    out += case_id + "\tunmatched_gold\t-\t" + std::to_string(j) + "\t-\n";
  }
  return out;
}

inline std::string format_case_diagnostic(const std::string& case_id,
                                          const ParseDiagnostic& d) {
  std::string out = case_id;
  out += ':';
  out += std::to_string(d.line);
  out += d.severity == Severity::error ? ": error: " : ": warning: ";
  out += diag_code_name(d.code);
  if (!d.message.empty()) {
    out += ": ";
    out += d.message;
  }
  return out;
}

}  // namespace casetree
