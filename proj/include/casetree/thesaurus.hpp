#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "casetree/diagnostics.hpp"
#include "casetree/error.hpp"

namespace casetree {

/// Many-to-one map from surface forms to representative forms. Unknown
/// surfaces map to themselves, and representatives are fixed points: chains
/// in the source file are collapsed at load time.
class Thesaurus {
 public:
  void add(std::string surface, std::string representative) {
    entries_[std::move(surface)] = std::move(representative);
  }

  /// Representative form; the input itself when unknown.
  std::string lookup(const std::string& surface) const {
    auto it = entries_.find(surface);
    return it == entries_.end() ? surface : it->second;
  }

  bool contains(const std::string& surface) const {
    return entries_.count(surface) > 0;
  }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Collapses representative chains (a→b, b→c becomes a→c). Cycles are
  /// reported and left pointing one step along the chain.
  std::vector<ParseDiagnostic> resolve_chains() {
    std::vector<ParseDiagnostic> warnings;
    for (auto& [surface, rep] : entries_) {
      std::string current = rep;
      size_t hops = 0;
      const size_t limit = entries_.size() + 1;
      while (true) {
        auto it = entries_.find(current);
        if (it == entries_.end() || it->second == current) break;
        if (++hops > limit) {
          warnings.push_back({0, Severity::warning, DiagCode::MappingCycle,
                              "representative chain for '" + surface +
                                  "' never reaches a fixed point"});
          break;
        }
        current = it->second;
      }
      rep = current;
    }
    return warnings;
  }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

struct ThesaurusLoad {
  Thesaurus thesaurus;
  std::vector<ParseDiagnostic> warnings;
};

/// Reads the two-column TSV form: surface<TAB>representative, one pair per
/// line, # starts a comment. Duplicate surfaces keep the last mapping.
inline ThesaurusLoad load_thesaurus(std::istream& in) {
  ThesaurusLoad result;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      result.warnings.push_back({line_no, Severity::warning,
                                 DiagCode::MalformedLine,
                                 "expected surface<TAB>representative"});
      continue;
    }
    std::string surface = line.substr(0, tab);
    std::string rep = line.substr(tab + 1);
    if (result.thesaurus.contains(surface)) {
      result.warnings.push_back({line_no, Severity::warning,
                                 DiagCode::DuplicateMapping,
                                 "duplicate surface '" + surface +
                                     "'; last mapping wins"});
    }
    result.thesaurus.add(std::move(surface), std::move(rep));
  }
  auto chain_warnings = result.thesaurus.resolve_chains();
  result.warnings.insert(result.warnings.end(), chain_warnings.begin(),
                         chain_warnings.end());
  return result;
}

inline ThesaurusLoad load_thesaurus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open thesaurus file: " + path);
  return load_thesaurus(in);
}

}  // namespace casetree
