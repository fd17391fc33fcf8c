#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "casetree/error.hpp"
#include "casetree/metrics.hpp"
#include "casetree/triplets.hpp"

// Corpus interchange. Two on-disk forms carry the same content:
//   - a directory of <case_id>.tree files holding the raw tree text;
//   - a JSON-lines file, one {"id": ..., "tree": ..., "report"?: ...}
//     object per line.
// Both keep the tree as text so any tool with a string emitter can produce
// a corpus.

namespace casetree {

struct CaseRecord {
  std::string id;
  std::string tree_text;
  std::string report;  // optional free-text source document

  bool operator==(const CaseRecord&) const = default;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

inline std::vector<CaseRecord> load_tree_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tree") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<CaseRecord> records;
  records.reserve(files.size());
  for (const auto& file : files) {
    records.push_back({file.stem().string(), read_file(file), ""});
  }
  return records;
}

inline std::vector<CaseRecord> load_record_stream(std::istream& in,
                                                  const std::string& origin) {
  std::vector<CaseRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw Error(ErrorKind::data, origin + ":" + std::to_string(line_no) +
                                       ": not a JSON object");
    }
    if (!record.contains("id") || !record["id"].is_string() ||
        !record.contains("tree") || !record["tree"].is_string()) {
      throw Error(ErrorKind::data,
                  origin + ":" + std::to_string(line_no) +
                      ": record needs string fields 'id' and 'tree'");
    }
    CaseRecord rec;
    rec.id = record["id"].get<std::string>();
    rec.tree_text = record["tree"].get<std::string>();
    if (record.contains("report") && record["report"].is_string()) {
      rec.report = record["report"].get<std::string>();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace detail

/// Loads a corpus from a .tree directory or a JSON-lines record file.
/// Case ids must be unique.
inline std::vector<CaseRecord> load_corpus(const std::filesystem::path& path) {
  std::error_code ec;
  std::vector<CaseRecord> records;
  if (std::filesystem::is_directory(path, ec)) {
    records = detail::load_tree_directory(path);
  } else if (std::filesystem::is_regular_file(path, ec)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open corpus: " + path.string());
    records = detail::load_record_stream(in, path.string());
  } else {
    throw Error(ErrorKind::io, "no such corpus: " + path.string());
  }
  std::unordered_set<std::string> ids;
  for (const auto& rec : records) {
    if (!ids.insert(rec.id).second) {
      throw Error(ErrorKind::data, "duplicate case id: " + rec.id);
    }
  }
  return records;
}

inline std::string to_record_line(const CaseRecord& rec) {
  nlohmann::json record;
  record["id"] = rec.id;
  record["tree"] = rec.tree_text;
  if (!rec.report.empty()) record["report"] = rec.report;
  return record.dump();
}

/// Manual evaluation scores: case_id<TAB>score rows, scores in [0, 100],
/// # starts a comment.
inline std::vector<ManualScore> load_manual_scores(std::istream& in,
                                                   const std::string& origin) {
  std::vector<ManualScore> scores;
  std::unordered_set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorKind::data, origin + ":" + std::to_string(line_no) +
                                       ": expected case_id<TAB>score");
    }
    ManualScore ms;
    ms.case_id = line.substr(0, tab);
    try {
      size_t used = 0;
      ms.score = std::stod(line.substr(tab + 1), &used);
      std::string rest = line.substr(tab + 1 + used);
      if (rest.find_first_not_of(" \t") != std::string::npos) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::data, origin + ":" + std::to_string(line_no) +
                                       ": score is not a number");
    }
    if (ms.score < 0.0 || ms.score > 100.0) {
      throw Error(ErrorKind::data, origin + ":" + std::to_string(line_no) +
                                       ": score outside [0, 100]");
    }
    if (!ids.insert(ms.case_id).second) {
      throw Error(ErrorKind::data, origin + ":" + std::to_string(line_no) +
                                       ": duplicate case id: " + ms.case_id);
    }
    scores.push_back(std::move(ms));
  }
  return scores;
}

inline std::vector<ManualScore> load_manual_scores_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open manual scores: " + path.string());
  return load_manual_scores(in, path.string());
}

/// Gold-driven pairing: every gold case appears once; a gold case without a
/// prediction gets an empty record. Prediction ids absent from gold are an
/// error listing the offenders.
struct PairedCase {
  CaseRecord gold;
  CaseRecord pred;        // pred.id empty when the prediction is missing
  bool pred_missing = false;
};

inline std::vector<PairedCase> pair_corpora(std::vector<CaseRecord> gold,
                                            std::vector<CaseRecord> pred) {
  std::unordered_map<std::string, CaseRecord*> pred_by_id;
  for (auto& rec : pred) pred_by_id[rec.id] = &rec;

  std::unordered_set<std::string> gold_ids;
  for (const auto& rec : gold) gold_ids.insert(rec.id);
  std::string orphans;
  for (const auto& rec : pred) {
    if (!gold_ids.count(rec.id)) {
      if (!orphans.empty()) orphans += ", ";
      orphans += rec.id;
    }
  }
  if (!orphans.empty()) {
    throw Error(ErrorKind::data, "predictions without a gold case: " + orphans);
  }

  std::sort(gold.begin(), gold.end(),
            [](const CaseRecord& a, const CaseRecord& b) { return a.id < b.id; });
  std::vector<PairedCase> pairs;
  pairs.reserve(gold.size());
  for (auto& g : gold) {
    PairedCase pc;
    auto it = pred_by_id.find(g.id);
    if (it == pred_by_id.end()) {
      pc.pred_missing = true;
    } else {
      pc.pred = std::move(*it->second);
    }
    pc.gold = std::move(g);
    pairs.push_back(std::move(pc));
  }
  return pairs;
}

}  // namespace casetree
