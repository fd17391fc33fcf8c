// Acceptance suite: end-to-end checks of the toolkit against independent
// reference computations. Each criterion prints one PASS/FAIL line; the
// process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casetree/casetree.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace casetree;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. parse(serialize(f)) identity on 1000 random forests in under 5 seconds

bool check_round_trip(std::string& detail) {
  std::mt19937 rng(20240401);
  auto start = Clock::now();
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    CausalForest forest = gen::random_forest(rng);
    ParseResult reparsed = parse_forest(serialize_forest(forest));
    if (!reparsed.ok() || *reparsed.forest != forest) ++failures;
  }
  double elapsed = seconds_since(start);
  detail = "1000 forests, " + std::to_string(failures) + " failures, " +
           fmt("%.2f", elapsed) + "s";
  return failures == 0 && elapsed < 5.0;
}

// --------------------------------------------------------------------------
// 2. grammar conformance on the documented single-operator and combined lines

bool check_grammar(std::string& detail) {
  int failures = 0;
  auto expect = [&](const std::string& line, const Node& want) {
    NodeParse result = parse_node_line(line);
    if (!result.ok() || *result.node != want) ++failures;
  };

  expect("完全閉塞 @ 冠動脈",
         Node{{"完全閉塞"}, false,
              {{RelationType::located, {"冠動脈"}, {}}}, {}});
  expect("SpO2 / 低値",
         Node{{"SpO2"}, false, {{RelationType::polarity, {"低値"}, {}}}, {}});
  expect("心エコー = 僧帽弁逆流",
         Node{{"僧帽弁逆流"}, false,
              {{RelationType::tested, {"心エコー"}, {}}}, {}});
  expect("泡沫状 ＊ 痰",
         Node{{"痰"}, false, {{RelationType::featured, {"泡沫状"}, {}}}, {}});
  expect("H:アルコール性肝線維症", Node{{"アルコール性肝線維症"}, true, {}, {}});
  expect("H:ステロイド / 有効",
         Node{{"ステロイド"}, true,
              {{RelationType::polarity, {"有効"}, {}}}, {}});
  expect("MRI = DWI高信号 @ 右 ＊ 大脳半球",
         Node{{"DWI高信号"}, false,
              {{RelationType::tested, {"MRI"}, {}},
               {RelationType::located, {"大脳半球"},
                {{RelationType::featured, {"右"}, {}}}}}, {}});

  detail = "7 lines, " + std::to_string(failures) + " mismatches";
  return failures == 0;
}

// --------------------------------------------------------------------------
// 3. the worked example decomposes into exactly its ten triplets

bool check_decomposition(std::string& detail) {
  ParseResult parsed = parse_forest(
      "急性心筋梗塞\n"
      "  胸痛\n"
      "  完全閉塞 @ 冠動脈\n"
      "  心エコー = 僧帽弁逆流\n"
      "    SpO2 / 低値\n"
      "    泡沫状 ＊ 痰\n");
  if (!parsed.ok()) {
    detail = "example tree failed to parse";
    return false;
  }
  TripletSet set = decompose(*parsed.forest);
  struct Row {
    const char* head;
    RelationType relation;
    const char* tail;
    int depth;
  };
  const Row expected[] = {
      {"[root]", RelationType::parent_of, "急性心筋梗塞", 0},
      {"急性心筋梗塞", RelationType::parent_of, "胸痛", 1},
      {"急性心筋梗塞", RelationType::parent_of, "完全閉塞", 1},
      {"完全閉塞", RelationType::located, "冠動脈", 2},
      {"急性心筋梗塞", RelationType::parent_of, "僧帽弁逆流", 1},
      {"僧帽弁逆流", RelationType::tested, "心エコー", 2},
      {"僧帽弁逆流", RelationType::parent_of, "SpO2", 2},
      {"SpO2", RelationType::polarity, "低値", 3},
      {"僧帽弁逆流", RelationType::parent_of, "痰", 2},
      {"痰", RelationType::featured, "泡沫状", 3},
  };
  int failures = 0;
  if (set.triplets.size() != 10) ++failures;
  for (size_t i = 0; i < set.triplets.size() && i < 10; ++i) {
    const Triplet& t = set.triplets[i];
    const Row& want = expected[i];
    bool root_ok = (std::string(want.head) == "[root]") == t.head.is_root;
    if (!root_ok || t.head.surface != want.head || t.relation != want.relation ||
        t.tail != want.tail || t.depth != want.depth) {
      ++failures;
    }
  }
  // The two depths called out explicitly: the dummy-rooted triplet and the
  // first child triplet.
  if (set.triplets.size() == 10 &&
      (set.triplets[0].depth != 0 || set.triplets[1].depth != 1)) {
    ++failures;
  }
  detail = std::to_string(set.triplets.size()) + " triplets, " +
           std::to_string(failures) + " mismatches";
  return failures == 0;
}

// --------------------------------------------------------------------------
// 4. analytic weight table at C=2

bool check_weight_table(std::string& detail) {
  auto t = [](RelationType rel, int depth) {
    Triplet out;
    out.head = Endpoint::entity("A");
    out.relation = rel;
    out.tail = "B";
    out.depth = depth;
    return out;
  };
  WeightScheme rec{WeightMethod::reciprocal, 2.0};
  WeightScheme exp{WeightMethod::exponential, 2.0};
  struct Check {
    double got;
    double want;
  };
  const Check checks[] = {
      {triplet_weight(t(RelationType::parent_of, 0), rec), 1.0},
      {triplet_weight(t(RelationType::parent_of, 1), rec), 1.0 / 3.0},
      {triplet_weight(t(RelationType::located, 2), rec), 0.1},
      {triplet_weight(t(RelationType::parent_of, 1), exp), 0.5},
      {triplet_weight(t(RelationType::featured, 2), exp), 0.125},
  };
  double worst = 0.0;
  for (const auto& c : checks) {
    worst = std::max(worst, std::fabs(c.got - c.want));
  }
  detail = "max deviation " + fmt("%.2e", worst);
  return worst < 1e-12;
}

// --------------------------------------------------------------------------
// 5. entity matching vs an independent edit-distance implementation

bool check_matching_oracle(std::string& detail) {
  std::mt19937 rng(77);
  MatchConfig cfg;
  int disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string pred = gen::random_surface(rng, 1, 20);
    std::string gold = gen::random_surface(rng, 1, 20);
    auto pc = decode_utf8(pred);
    auto gc = decode_utf8(gold);
    size_t dist = oracle::edit_distance(*pc, *gc);
    double want_ratio = static_cast<double>(dist) / gc->size();
    bool want_matched = want_ratio < cfg.threshold;  // strict less-than
    MatchResult got = entity_match(pred, gold, cfg);
    if (got.matched != want_matched ||
        std::fabs(got.ratio - want_ratio) > 1e-12) {
      ++disagreements;
    }
    // Polarity values: only canonical equality may match.
    MatchResult polar = entity_match(pred, gold, cfg, true);
    bool want_polar = normalize(pred, cfg) == normalize(gold, cfg);
    if (polar.matched != want_polar) ++disagreements;
  }
  // Boundary: distance 1 on a 2-character gold is exactly 0.5 and must lose.
  if (entity_match("低", "低値", cfg).matched) ++disagreements;
  detail = "10000 pairs, " + std::to_string(disagreements) + " disagreements";
  return disagreements == 0;
}

// --------------------------------------------------------------------------
// 6. greedy alignment vs exhaustive assignment on exact-match instances

bool check_alignment_oracle(std::string& detail) {
  std::mt19937 rng(88);
  const char* names[] = {"a", "b", "c", "ab", "abc", "bc"};
  std::uniform_int_distribution<int> name_dist(0, 5);
  std::uniform_int_distribution<int> rel_dist(0, 4);
  std::uniform_int_distribution<int> size_dist(0, 8);
  auto random_set = [&] {
    TripletSet set;
    int n = size_dist(rng);
    for (int i = 0; i < n; ++i) {
      Triplet t;
      t.head = Endpoint::entity(names[name_dist(rng)]);
      t.relation = static_cast<RelationType>(rel_dist(rng));
      t.tail = names[name_dist(rng)];
      t.depth = 1;
      set.triplets.push_back(std::move(t));
    }
    return set;
  };

  MatchConfig exact_cfg;
  exact_cfg.threshold = 1e-9;  // no fuzzy matches possible
  int exact_disagreements = 0;
  for (int iter = 0; iter < 500; ++iter) {
    TripletSet pred = random_set();
    TripletSet gold = random_set();
    Alignment greedy = align(pred, gold, exact_cfg);
    int optimal = oracle::max_matching(
        static_cast<int>(pred.triplets.size()),
        static_cast<int>(gold.triplets.size()), [&](int i, int j) {
          return triplet_match(pred.triplets[i], gold.triplets[j], exact_cfg)
              .matched;
        });
    if (static_cast<int>(greedy.pairs.size()) != optimal) ++exact_disagreements;
  }

  // Fuzzy costs may diverge from the optimum; measured and reported only.
  MatchConfig fuzzy_cfg;
  int fuzzy_divergences = 0;
  for (int iter = 0; iter < 500; ++iter) {
    TripletSet pred = random_set();
    TripletSet gold = random_set();
    Alignment greedy = align(pred, gold, fuzzy_cfg);
    int optimal = oracle::max_matching(
        static_cast<int>(pred.triplets.size()),
        static_cast<int>(gold.triplets.size()), [&](int i, int j) {
          return triplet_match(pred.triplets[i], gold.triplets[j], fuzzy_cfg)
              .matched;
        });
    if (static_cast<int>(greedy.pairs.size()) != optimal) ++fuzzy_divergences;
  }

  detail = "500 exact instances, " + std::to_string(exact_disagreements) +
           " disagreements; fuzzy divergence on " +
           std::to_string(fuzzy_divergences) + "/500 (reported only)";
  return exact_disagreements == 0;
}

// --------------------------------------------------------------------------
// 7. scoring identities

bool check_scoring_identities(std::string& detail) {
  int failures = 0;
  std::mt19937 rng(99);
  CausalForest forest = gen::random_forest(rng);
  TripletSet set = decompose(forest);
  for (WeightMethod method :
       {WeightMethod::none, WeightMethod::reciprocal, WeightMethod::exponential}) {
    CaseScore s = score_case(set, set, align(set, set, {}), {method, 2.0});
    if (std::fabs(s.precision - 1.0) > 1e-12 || std::fabs(s.recall - 1.0) > 1e-12 ||
        std::fabs(s.f1 - 1.0) > 1e-12) {
      ++failures;
    }
  }

  TripletSet empty;
  CaseScore zero = score_case(empty, set, align(empty, set, {}),
                              {WeightMethod::reciprocal, 2.0});
  if (zero.precision != 0.0 || zero.recall != 0.0 || zero.f1 != 0.0) ++failures;

  auto t = [](const char* head, RelationType rel, const char* tail) {
    Triplet out;
    out.head = Endpoint::entity(head);
    out.relation = rel;
    out.tail = tail;
    out.depth = 1;
    return out;
  };
  TripletSet gold, pred;
  gold.triplets = {t("A", RelationType::parent_of, "B"),
                   t("A", RelationType::parent_of, "C"),
                   t("B", RelationType::located, "D"),
                   t("B", RelationType::polarity, "E")};
  pred.triplets = {t("A", RelationType::parent_of, "B"),
                   t("B", RelationType::located, "D"),
                   t("XXXX", RelationType::parent_of, "YYYY")};
  CaseScore s = score_case(pred, gold, align(pred, gold, {}),
                           {WeightMethod::none, 2.0});
  if (std::fabs(s.precision - 0.6667) > 1e-4 || std::fabs(s.recall - 0.5) > 1e-4 ||
      std::fabs(s.f1 - 0.5714) > 1e-4) {
    ++failures;
  }
  detail = "P=" + fmt("%.4f", s.precision) + " R=" + fmt("%.4f", s.recall) +
           " F1=" + fmt("%.4f", s.f1) + ", " + std::to_string(failures) +
           " failures";
  return failures == 0;
}

// --------------------------------------------------------------------------
// 8. shallow errors outweigh deep errors, 100/100 forests

bool check_shallow_dominance(std::string& detail) {
  std::mt19937 rng(111);
  gen::ForestGenOptions opt;
  opt.spine = 5;  // guarantees parent_of triplets at depths 1 and 3
  opt.unique_surfaces = true;
  int holds = 0;
  for (int iter = 0; iter < 100; ++iter) {
    TripletSet gold = decompose(gen::random_forest(rng, opt));
    auto without_parent_of_at = [&](int depth) {
      TripletSet out = gold;
      for (size_t i = 0; i < out.triplets.size(); ++i) {
        if (out.triplets[i].relation == RelationType::parent_of &&
            out.triplets[i].depth == depth) {
          out.triplets.erase(out.triplets.begin() + i);
          return out;
        }
      }
      return out;
    };
    TripletSet shallow = without_parent_of_at(1);
    TripletSet deep = without_parent_of_at(3);
    bool ok = true;
    for (WeightMethod method :
         {WeightMethod::reciprocal, WeightMethod::exponential}) {
      WeightScheme scheme{method, 2.0};
      double f1_shallow =
          score_case(shallow, gold, align(shallow, gold, {}), scheme).f1;
      double f1_deep = score_case(deep, gold, align(deep, gold, {}), scheme).f1;
      ok = ok && f1_shallow < f1_deep;
    }
    if (ok) ++holds;
  }
  detail = std::to_string(holds) + "/100 forests";
  return holds == 100;
}

// --------------------------------------------------------------------------
// 9. Pearson vs the brute-force formula

bool check_pearson_oracle(std::string& detail) {
  std::mt19937 rng(131);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_int_distribution<int> len(2, 50);
  int failures = 0;
  double worst = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    int n = len(rng);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = value(rng);
      ys[i] = value(rng);
    }
    double got = pearson(xs, ys);
    double want = oracle::pearson(xs, ys);
    worst = std::max(worst, std::fabs(got - want));
    if (std::fabs(got - want) > 1e-9) ++failures;
  }
  std::vector<double> a = {1, 2, 3}, b = {2, 4, 6};
  if (pearson(a, b) != 1.0) ++failures;
  detail = "100 pairs, max deviation " + fmt("%.2e", worst) +
           ", [1,2,3] vs [2,4,6] = " + fmt("%.1f", pearson(a, b));
  return failures == 0;
}

// --------------------------------------------------------------------------
// 10. scoring 1000 synthetic cases in under 10 s, byte-identical in parallel

std::string drop_random_leaf(const std::string& tree, std::mt19937& rng) {
  std::vector<std::string> lines;
  std::istringstream in(tree);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  auto indent_of = [](const std::string& s) {
    size_t i = 0;
    while (i < s.size() && s[i] == ' ') ++i;
    return i;
  };
  std::vector<size_t> leaves;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i + 1 == lines.size() || indent_of(lines[i + 1]) <= indent_of(lines[i])) {
      if (indent_of(lines[i]) > 0) leaves.push_back(i);
    }
  }
  if (!leaves.empty()) {
    size_t victim = leaves[std::uniform_int_distribution<size_t>(
        0, leaves.size() - 1)(rng)];
    lines.erase(lines.begin() + victim);
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

bool check_throughput(std::string& detail) {
  std::mt19937 rng(151);
  gen::ForestGenOptions opt;
  opt.max_depth = 4;
  opt.max_fanout = 4;
  opt.max_modifiers = 2;

  testutil::TempDir dir;
  std::string gold_lines, pred_lines;
  size_t total_triplets = 0;
  for (int i = 0; i < 1000; ++i) {
    CausalForest forest;
    for (int attempt = 0; attempt < 50; ++attempt) {
      forest = gen::random_forest(rng, opt);
      size_t size = node_count(forest) + modifier_count(forest);
      if (size >= 20 && size <= 45) break;
    }
    total_triplets += node_count(forest) + modifier_count(forest);
    char id[16];
    std::snprintf(id, sizeof(id), "case%04d", i);
    CaseRecord gold{id, serialize_forest(forest), ""};
    CaseRecord pred{id, drop_random_leaf(gold.tree_text, rng), ""};
    gold_lines += to_record_line(gold) + "\n";
    pred_lines += to_record_line(pred) + "\n";
  }
  testutil::write_file(dir.path / "gold.jsonl", gold_lines);
  testutil::write_file(dir.path / "pred.jsonl", pred_lines);

  std::string serial_out;
  auto start = Clock::now();
  int code = testutil::run_cli("score -j 1 --format records " +
                                   (dir.path / "gold.jsonl").string() + " " +
                                   (dir.path / "pred.jsonl").string(),
                               &serial_out);
  double elapsed = seconds_since(start);

  std::string parallel_out;
  int code_parallel = testutil::run_cli("score -j 4 --format records " +
                                            (dir.path / "gold.jsonl").string() +
                                            " " +
                                            (dir.path / "pred.jsonl").string(),
                                        &parallel_out);

  bool ok = code == 0 && code_parallel == 0 && elapsed < 10.0 &&
            serial_out == parallel_out && !serial_out.empty();
  detail = "1000 cases (" + std::to_string(total_triplets / 1000) +
           " triplets/case avg), " + fmt("%.2f", elapsed) + "s single-threaded, " +
           (serial_out == parallel_out ? "parallel output identical"
                                       : "parallel output DIFFERS");
  return ok;
}

struct Criterion {
  const char* name;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"format round-trip on 1000 random forests", check_round_trip},
      {"grammar conformance on the documented examples", check_grammar},
      {"decomposition of the worked example", check_decomposition},
      {"analytic weight table at C=2", check_weight_table},
      {"entity matching vs reference edit distance", check_matching_oracle},
      {"greedy alignment vs exhaustive assignment", check_alignment_oracle},
      {"scoring identities", check_scoring_identities},
      {"shallow-error dominance", check_shallow_dominance},
      {"Pearson correlation vs brute force", check_pearson_oracle},
      {"end-to-end throughput and determinism", check_throughput},
  };

  int failures = 0;
  int number = 1;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool passed = false;
    try {
      passed = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!passed) ++failures;
    std::printf("%s %2d. %s (%s)\n", passed ? "PASS" : "FAIL", number,
                criterion.name, detail.c_str());
    ++number;
  }
  if (failures > 0) {
    std::printf("%d of 10 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
