// casetree command line: validate, decompose, score, stats, correlate, and
// sweep over tree-summary corpora. Exit codes: 0 success, 1 data/validation
// failure, 2 environment or IO failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "casetree/casetree.hpp"

using namespace casetree;

namespace {

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write output: " + path);
    out << text;
  }
};

void add_config_options(CLI::App* cmd, RunConfig* config, bool* no_normalize) {
  static const std::map<std::string, WeightMethod> methods{
      {"none", WeightMethod::none},
      {"reciprocal", WeightMethod::reciprocal},
      {"exponential", WeightMethod::exponential}};
  static const std::map<std::string, OutputFormat> formats{
      {"text", OutputFormat::text}, {"records", OutputFormat::records}};
  cmd->add_option("--threshold", config->threshold,
                  "Match threshold on edit-distance/gold-length (default 0.5)")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("-m,--weighting", config->method,
                  "Triplet weighting: none, reciprocal, exponential")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  cmd->add_option("-C,--constant", config->C, "Weighting constant (default 2)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--root-only", config->root_only,
                "Score only the [root]-headed triplets");
  cmd->add_option("--thesaurus", config->thesaurus_path,
                  "Synonym TSV: surface<TAB>representative")
      ->envname("CASETREE_THESAURUS");
  cmd->add_flag("--no-normalize", *no_normalize,
                "Skip the Unicode compatibility fold before matching");
  cmd->add_option("-j,--jobs", config->jobs, "Worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", config->format, "Output format: text or records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

MatchConfig make_match_config(const RunConfig& config, const Thesaurus* thesaurus) {
  MatchConfig cfg;
  cfg.threshold = config.threshold;
  cfg.unicode_normalize = config.unicode_normalize;
  cfg.thesaurus = thesaurus;
  return cfg;
}

std::optional<Thesaurus> load_config_thesaurus(const RunConfig& config,
                                               bool quiet = false) {
  if (config.thesaurus_path.empty()) return std::nullopt;
  ThesaurusLoad load = load_thesaurus_file(config.thesaurus_path);
  if (!quiet) {
    for (const auto& w : load.warnings) {
      std::cerr << config.thesaurus_path << ":" << format_diagnostic(w) << "\n";
    }
  }
  return std::move(load.thesaurus);
}

std::vector<CaseRecord> load_sorted_corpus(const std::string& path) {
  std::vector<CaseRecord> records = load_corpus(path);
  std::sort(records.begin(), records.end(),
            [](const CaseRecord& a, const CaseRecord& b) { return a.id < b.id; });
  return records;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& corpus_path) {
  std::vector<CaseRecord> records = load_sorted_corpus(corpus_path);
  bool any_error = false;
  std::string out;
  for (const auto& rec : records) {
    for (const auto& d : validate(rec.tree_text)) {
      out += format_case_diagnostic(rec.id, d) + "\n";
      any_error |= d.severity == Severity::error;
    }
  }
  std::cout << out;
  return any_error ? 1 : 0;
}

int cmd_decompose(const std::string& corpus_path, const RunConfig& config,
                  const OutputTarget& output) {
  std::vector<CaseRecord> records = load_sorted_corpus(corpus_path);
  std::string out;
  if (config.format == OutputFormat::text) {
    out += std::string(kTripletTsvHeader) + "\n";
  }
  bool any_failed = false;
  for (const auto& rec : records) {
    ParseResult parsed = parse_forest(rec.tree_text, {.case_id = rec.id});
    if (!parsed.ok()) {
      any_failed = true;
      for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::error) {
          std::cerr << format_case_diagnostic(rec.id, d) << "\n";
        }
      }
      continue;
    }
    TripletSet set = decompose(*parsed.forest);
    for (const auto& t : set.triplets) {
      out += config.format == OutputFormat::text
                 ? triplet_tsv_row(rec.id, t)
                 : triplet_record_line(rec.id, t);
      out += '\n';
    }
  }
  output.write(out);
  return any_failed ? 1 : 0;
}

// Per-case scoring state shared by score/correlate/sweep.
struct ScoredCase {
  TripletSet pred;
  TripletSet gold;
  Alignment alignment;
  CaseReportFlags flags;
  std::string gold_error;  // non-empty when the gold tree does not parse
};

std::vector<ScoredCase> parse_and_align(const std::vector<PairedCase>& pairs,
                                        const MatchConfig& cfg,
                                        const RunConfig& config) {
  std::vector<ScoredCase> cases(pairs.size());
  parallel_for(pairs.size(), config.jobs, [&](size_t i) {
    const PairedCase& pair = pairs[i];
    ScoredCase& slot = cases[i];
    ParseResult gold = parse_forest(pair.gold.tree_text, {.case_id = pair.gold.id});
    if (!gold.ok()) {
      for (const auto& d : gold.diagnostics) {
        if (d.severity == Severity::error) {
          slot.gold_error = format_case_diagnostic(pair.gold.id, d);
          break;
        }
      }
      return;
    }
    slot.gold = decompose(*gold.forest);
    slot.pred.case_id = pair.gold.id;
    if (pair.pred_missing) {
      slot.flags.pred_missing = true;
    } else {
      ParseResult pred = parse_forest(pair.pred.tree_text, {.case_id = pair.gold.id});
      if (!pred.ok()) {
        slot.flags.pred_invalid = true;  // scored as an empty prediction
      } else {
        slot.pred = decompose(*pred.forest);
      }
    }
    if (config.root_only) {
      slot.pred = root_triplets(slot.pred);
      slot.gold = root_triplets(slot.gold);
    }
    slot.alignment = align(slot.pred, slot.gold, cfg);
  });
  return cases;
}

int report_gold_errors(const std::vector<ScoredCase>& cases) {
  int bad = 0;
  for (const auto& c : cases) {
    if (!c.gold_error.empty()) {
      std::cerr << "gold: " << c.gold_error << "\n";
      ++bad;
    }
  }
  return bad;
}

int cmd_score(const std::string& gold_path, const std::string& pred_path,
              const RunConfig& config, const OutputTarget& output,
              const std::string& dump_alignment_path) {
  std::vector<PairedCase> pairs =
      pair_corpora(load_corpus(gold_path), load_corpus(pred_path));
  std::optional<Thesaurus> thesaurus = load_config_thesaurus(config);
  MatchConfig cfg = make_match_config(config, thesaurus ? &*thesaurus : nullptr);

  std::vector<ScoredCase> cases = parse_and_align(pairs, cfg, config);
  if (report_gold_errors(cases) > 0) return 1;

  WeightScheme weighted_scheme{config.method, config.C};
  WeightScheme none_scheme{WeightMethod::none, config.C};
  std::vector<CaseScore> weighted, unweighted;
  ScoreReport report;
  report.config = config;
  for (const auto& c : cases) {
    weighted.push_back(score_case(c.pred, c.gold, c.alignment, weighted_scheme));
    unweighted.push_back(score_case(c.pred, c.gold, c.alignment, none_scheme));
    report.case_flags.push_back(c.flags);
  }
  report.weighted = aggregate_cases(std::move(weighted));
  report.unweighted = aggregate_cases(std::move(unweighted));

  output.write(config.format == OutputFormat::records
                   ? render_score_json(report)
                   : render_score_text(report));

  if (!dump_alignment_path.empty()) {
    std::string dump = std::string(kAlignmentTsvHeader) + "\n";
    for (const auto& c : cases) {
      dump += alignment_dump_rows(c.gold.case_id, c.alignment);
    }
    OutputTarget{dump_alignment_path}.write(dump);
  }
  return 0;
}

int cmd_stats(const std::string& corpus_path, const RunConfig& config,
              const OutputTarget& output) {
  std::vector<CaseRecord> records = load_sorted_corpus(corpus_path);
  std::vector<CausalForest> forests;
  forests.reserve(records.size());
  bool any_failed = false;
  for (const auto& rec : records) {
    ParseResult parsed = parse_forest(rec.tree_text, {.case_id = rec.id});
    if (!parsed.ok()) {
      any_failed = true;
      for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::error) {
          std::cerr << format_case_diagnostic(rec.id, d) << "\n";
        }
      }
      continue;
    }
    forests.push_back(std::move(*parsed.forest));
  }
  if (any_failed) return 1;
  StatsReport stats = forest_stats(forests);
  output.write(config.format == OutputFormat::records
                   ? render_stats_json(stats, config)
                   : render_stats_text(stats, config));
  return 0;
}

struct PerCaseF1 {
  std::vector<std::string> case_ids;
  std::vector<double> f1;
};

PerCaseF1 per_case_weighted_f1(const std::string& gold_path,
                               const std::string& pred_path,
                               const RunConfig& config) {
  std::vector<PairedCase> pairs =
      pair_corpora(load_corpus(gold_path), load_corpus(pred_path));
  std::optional<Thesaurus> thesaurus = load_config_thesaurus(config);
  MatchConfig cfg = make_match_config(config, thesaurus ? &*thesaurus : nullptr);
  std::vector<ScoredCase> cases = parse_and_align(pairs, cfg, config);
  if (report_gold_errors(cases) > 0) {
    throw Error(ErrorKind::data, "gold corpus has unparseable cases");
  }
  PerCaseF1 out;
  WeightScheme scheme{config.method, config.C};
  for (const auto& c : cases) {
    out.case_ids.push_back(c.gold.case_id);
    out.f1.push_back(score_case(c.pred, c.gold, c.alignment, scheme).f1);
  }
  return out;
}

PerCaseF1 f1_from_report(const std::string& report_path) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open report: " + report_path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("report", "") != "score") {
    throw Error(ErrorKind::data, "not a score report: " + report_path);
  }
  PerCaseF1 out;
  for (const auto& c : j.at("cases")) {
    out.case_ids.push_back(c.at("case_id").get<std::string>());
    out.f1.push_back(c.at("weighted").at("f1").get<double>());
  }
  return out;
}

int cmd_correlate(const PerCaseF1& scored, const std::string& manual_path,
                  bool with_spearman, const RunConfig& config,
                  const OutputTarget& output) {
  std::vector<ManualScore> manual = load_manual_scores_file(manual_path);
  std::map<std::string, double> manual_by_id;
  for (const auto& m : manual) manual_by_id[m.case_id] = m.score;

  std::string missing;
  std::vector<double> paired;
  for (const auto& id : scored.case_ids) {
    auto it = manual_by_id.find(id);
    if (it == manual_by_id.end()) {
      if (!missing.empty()) missing += ", ";
      missing += id;
    } else {
      paired.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::data, "cases without a manual score: " + missing);
  }
  for (const auto& [id, score] : manual_by_id) {
    if (std::find(scored.case_ids.begin(), scored.case_ids.end(), id) ==
        scored.case_ids.end()) {
      std::cerr << "note: manual score for unknown case '" << id
                << "' ignored\n";
    }
  }

  CorrelationReport report;
  report.config = config;
  report.case_ids = scored.case_ids;
  report.f1 = scored.f1;
  report.manual = paired;
  report.pearson_r = pearson(report.f1, report.manual);
  if (with_spearman) {
    report.has_spearman = true;
    report.spearman_r = spearman(report.f1, report.manual);
  }
  output.write(config.format == OutputFormat::records
                   ? render_correlation_json(report)
                   : render_correlation_text(report));
  return 0;
}

int cmd_sweep(const std::string& gold_path, const std::string& pred_path,
              const std::string& manual_path,
              const std::vector<std::string>& method_names,
              const std::vector<double>& c_grid, const RunConfig& config,
              const OutputTarget& output) {
  std::vector<PairedCase> pairs =
      pair_corpora(load_corpus(gold_path), load_corpus(pred_path));
  std::optional<Thesaurus> thesaurus = load_config_thesaurus(config);
  MatchConfig cfg = make_match_config(config, thesaurus ? &*thesaurus : nullptr);
  std::vector<ScoredCase> parsed = parse_and_align(pairs, cfg, config);
  if (report_gold_errors(parsed) > 0) return 1;

  std::vector<CasePair> cases;
  cases.reserve(parsed.size());
  for (auto& c : parsed) {
    cases.push_back({std::move(c.pred), std::move(c.gold)});
  }

  std::vector<WeightMethod> methods;
  for (const auto& name : method_names) {
    auto method = weight_method_from_name(name);
    if (!method) throw Error(ErrorKind::data, "unknown weighting method: " + name);
    methods.push_back(*method);
  }
  std::vector<ManualScore> manual = load_manual_scores_file(manual_path);
  SweepTable table = sweep(cases, manual, cfg, methods, c_grid);
  output.write(config.format == OutputFormat::records
                   ? render_sweep_json(table, config)
                   : render_sweep_text(table, config));
  return 0;
}

int dispatch(const std::function<int()>& command) {
  try {
    return command();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::io ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "casetree: parse, decompose, and score causal-tree summaries of "
      "medical case reports"};
  app.require_subcommand(1);

  RunConfig config;
  bool no_normalize = false;
  bool with_spearman = false;
  std::string corpus_path, gold_path, pred_path, manual_path, report_path;
  std::string output_path, dump_alignment_path;
  std::vector<std::string> method_names = {"reciprocal", "exponential"};
  std::vector<double> c_grid = {0.5, 1.0, 2.0, 4.0, 8.0};

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Parse a corpus and print diagnostics");
  validate_cmd->add_option("corpus", corpus_path, "Tree directory or record file")
      ->required();

  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "Emit depth-annotated triplets");
  decompose_cmd->add_option("corpus", corpus_path, "Tree directory or record file")
      ->required();
  decompose_cmd->add_option("-o,--output", output_path, "Write here instead of stdout");
  add_config_options(decompose_cmd, &config, &no_normalize);

  CLI::App* score_cmd =
      app.add_subcommand("score", "Score predictions against a gold corpus");
  score_cmd->add_option("gold", gold_path, "Gold corpus")->required();
  score_cmd->add_option("pred", pred_path, "Predicted corpus")->required();
  score_cmd->add_option("-o,--output", output_path, "Write here instead of stdout");
  score_cmd->add_option("--dump-alignment", dump_alignment_path,
                        "Write per-case match details to this TSV");
  add_config_options(score_cmd, &config, &no_normalize);

  CLI::App* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("corpus", corpus_path, "Tree directory or record file")
      ->required();
  stats_cmd->add_option("-o,--output", output_path, "Write here instead of stdout");
  add_config_options(stats_cmd, &config, &no_normalize);

  CLI::App* correlate_cmd = app.add_subcommand(
      "correlate", "Correlate per-case weighted F1 with manual scores");
  correlate_cmd->add_option("gold", gold_path, "Gold corpus");
  correlate_cmd->add_option("pred", pred_path, "Predicted corpus");
  correlate_cmd->add_option("--manual", manual_path, "Manual scores TSV")
      ->required();
  correlate_cmd->add_option("--from-report", report_path,
                            "Read per-case F1 from a score report instead");
  correlate_cmd->add_flag("--spearman", with_spearman,
                          "Also print the Spearman rank correlation");
  correlate_cmd->add_option("-o,--output", output_path,
                            "Write here instead of stdout");
  add_config_options(correlate_cmd, &config, &no_normalize);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Correlation across weighting methods and constants");
  sweep_cmd->add_option("gold", gold_path, "Gold corpus")->required();
  sweep_cmd->add_option("pred", pred_path, "Predicted corpus")->required();
  sweep_cmd->add_option("--manual", manual_path, "Manual scores TSV")->required();
  sweep_cmd->add_option("--methods", method_names, "Weighting methods to sweep")
      ->delimiter(',');
  sweep_cmd->add_option("--C-grid", c_grid, "Constants to sweep")->delimiter(',');
  sweep_cmd->add_option("-o,--output", output_path, "Write here instead of stdout");
  add_config_options(sweep_cmd, &config, &no_normalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  config.unicode_normalize = !no_normalize;
  OutputTarget output{output_path};

  if (*validate_cmd) {
    return dispatch([&] { return cmd_validate(corpus_path); });
  }
  if (*decompose_cmd) {
    return dispatch([&] { return cmd_decompose(corpus_path, config, output); });
  }
  if (*score_cmd) {
    return dispatch([&] {
      return cmd_score(gold_path, pred_path, config, output, dump_alignment_path);
    });
  }
  if (*stats_cmd) {
    return dispatch([&] { return cmd_stats(corpus_path, config, output); });
  }
  if (*correlate_cmd) {
    return dispatch([&] {
      if (!report_path.empty()) {
        return cmd_correlate(f1_from_report(report_path), manual_path,
                             with_spearman, config, output);
      }
      if (gold_path.empty() || pred_path.empty()) {
        throw Error(ErrorKind::data,
                    "correlate needs gold and pred corpora, or --from-report");
      }
      return cmd_correlate(per_case_weighted_f1(gold_path, pred_path, config),
                           manual_path, with_spearman, config, output);
    });
  }
  if (*sweep_cmd) {
    return dispatch([&] {
      return cmd_sweep(gold_path, pred_path, manual_path, method_names, c_grid,
                       config, output);
    });
  }
  return 2;
}
