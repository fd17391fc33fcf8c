#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casetree/diagnostics.hpp"
#include "casetree/tree.hpp"
#include "casetree/unicode.hpp"

// Parser for the indentation-based tree text. Each non-blank line is one
// node; the indentation level is the tree depth, level-0 lines are roots.
//
// Line grammar:
//   line  := [ "H:" ] [ group " = " ] group ( (" @ " | " / ") group )*
//   group := entity ( " ＊ " entity )*
//
// "=" may appear at most once and splits the line into the test group and
// the body. Within a group the rightmost entity is the head and every
// preceding entity attaches to it as a featured modifier. "@" attaches the
// following group to the line head as a located modifier; "/" attaches a
// single entity as a polarity modifier. Operand whitespace is trimmed, so
// the spacing shown above is canonical, not required. Halfwidth "*" is
// accepted for "＊" with a warning.

namespace casetree {

enum class IndentUnit {
  autodetect,  // tab vs space decided by the first indented line; space unit 2
  two_spaces,
  spaces,  // ParseOptions::indent_width spaces per level
  tab,
};

struct ParseOptions {
  IndentUnit indent = IndentUnit::autodetect;
  int indent_width = 2;
  std::string case_id;
};

struct ParseResult {
  std::optional<CausalForest> forest;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return forest.has_value(); }
};

struct NodeParse {
  std::optional<Node> node;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return node.has_value(); }
};

namespace detail {

constexpr char32_t kLocatedOp = U'@';
constexpr char32_t kPolarityOp = U'/';
constexpr char32_t kTestedOp = U'=';
constexpr char32_t kFeaturedOp = U'＊';  // U+FF0A
constexpr char32_t kFeaturedAlias = U'*';

inline bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == 0x3000;
}

inline std::u32string trim_cps(const std::u32string& s) {
  size_t b = 0, e = s.size();
  while (b < e && is_space_cp(s[b])) ++b;
  while (e > b && is_space_cp(s[e - 1])) --e;
  return s.substr(b, e - b);
}

struct StarGroup {
  Entity head;
  std::vector<Modifier> featured;  // entities preceding the head, in order
};

// Splits a ＊ chain; the rightmost entity is the group head.
inline std::optional<StarGroup> parse_star_group(const std::u32string& text,
                                                 int line_no, bool& star_alias,
                                                 std::vector<ParseDiagnostic>& diags) {
  std::vector<std::u32string> operands;
  std::u32string current;
  for (char32_t cp : text) {
    if (cp == kFeaturedOp || cp == kFeaturedAlias) {
      if (cp == kFeaturedAlias) star_alias = true;
      operands.push_back(current);
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  operands.push_back(current);

  StarGroup group;
  for (size_t i = 0; i < operands.size(); ++i) {
    std::u32string entity = trim_cps(operands[i]);
    if (entity.empty()) {
      diags.push_back({line_no, Severity::error, DiagCode::EmptyOperand,
                       "empty entity around ＊"});
      return std::nullopt;
    }
    if (i + 1 == operands.size()) {
      group.head = Entity{to_utf8(entity)};
    } else {
      group.featured.push_back(
          {RelationType::featured, Entity{to_utf8(entity)}, {}});
    }
  }
  return group;
}

inline bool contains_body_op(const std::u32string& s) {
  return s.find(kLocatedOp) != std::u32string::npos ||
         s.find(kPolarityOp) != std::u32string::npos;
}

inline std::optional<Node> parse_node_cps(const std::u32string& raw, int line_no,
                                          std::vector<ParseDiagnostic>& diags) {
  bool star_alias = false;
  std::u32string s = trim_cps(raw);

  Node node;
  if (s.size() >= 2 && s[0] == U'H' && s[1] == U':') {
    node.history = true;
    s = trim_cps(s.substr(2));
    if (s.empty()) {
      diags.push_back({line_no, Severity::error, DiagCode::EmptyOperand,
                       "nothing follows H:"});
      return std::nullopt;
    }
  }

  size_t eq_count = std::count(s.begin(), s.end(), kTestedOp);
  if (eq_count > 1) {
    diags.push_back({line_no, Severity::error, DiagCode::MultipleTests,
                     "more than one = on a line"});
    return std::nullopt;
  }

  std::optional<Modifier> tested;
  std::u32string body = s;
  if (eq_count == 1) {
    size_t pos = s.find(kTestedOp);
    std::u32string test_part = trim_cps(s.substr(0, pos));
    body = trim_cps(s.substr(pos + 1));
    if (test_part.empty()) {
      diags.push_back({line_no, Severity::error, DiagCode::EmptyOperand,
                       "empty test name before ="});
      return std::nullopt;
    }
    if (body.empty()) {
      diags.push_back({line_no, Severity::error, DiagCode::EmptyOperand,
                       "nothing follows ="});
      return std::nullopt;
    }
    if (contains_body_op(test_part)) {
      diags.push_back({line_no, Severity::error, DiagCode::UnexpectedOperator,
                       "@ or / before ="});
      return std::nullopt;
    }
    auto group = parse_star_group(test_part, line_no, star_alias, diags);
    if (!group) return std::nullopt;
    tested = Modifier{RelationType::tested, group->head, std::move(group->featured)};
  }

  // Split the body at every @ and /.
  std::vector<std::pair<char32_t, std::u32string>> segments;
  segments.emplace_back(U'\0', std::u32string());
  for (char32_t cp : body) {
    if (cp == kLocatedOp || cp == kPolarityOp) {
      segments.emplace_back(cp, std::u32string());
    } else {
      segments.back().second.push_back(cp);
    }
  }

  auto head_group = parse_star_group(segments[0].second, line_no, star_alias, diags);
  if (!head_group) {
    if (!diags.empty() && diags.back().code == DiagCode::EmptyOperand &&
        trim_cps(segments[0].second).empty()) {
      diags.back().message = segments.size() > 1 ? "empty head before operator"
                                                 : "empty node line";
    }
    return std::nullopt;
  }
  node.head = head_group->head;

  if (tested) node.modifiers.push_back(std::move(*tested));
  for (auto& f : head_group->featured) node.modifiers.push_back(std::move(f));

  for (size_t i = 1; i < segments.size(); ++i) {
    auto group = parse_star_group(segments[i].second, line_no, star_alias, diags);
    if (!group) {
      if (!diags.empty() && diags.back().code == DiagCode::EmptyOperand) {
        diags.back().message = segments[i].first == kLocatedOp
                                   ? "empty entity after @"
                                   : "empty entity after /";
      }
      return std::nullopt;
    }
    if (segments[i].first == kPolarityOp) {
      if (!group->featured.empty()) {
        diags.push_back({line_no, Severity::error, DiagCode::UnexpectedOperator,
                         "polarity value must be a single entity"});
        return std::nullopt;
      }
      node.modifiers.push_back({RelationType::polarity, group->head, {}});
    } else {
      node.modifiers.push_back(
          {RelationType::located, group->head, std::move(group->featured)});
    }
  }

  if (star_alias) {
    diags.push_back({line_no, Severity::warning, DiagCode::NonCanonicalSymbol,
                     "halfwidth * used for ＊"});
  }
  return node;
}

// One physical line of input, decoded and classified.
struct ScannedLine {
  int line_no = 0;
  int level = 0;
  std::u32string content;  // indentation stripped, trailing whitespace kept
  bool blank = false;
  bool failed = false;
  bool crlf = false;
  bool trailing_ws = false;
  int indent_width = 0;
  bool indent_tabs = false;
};

struct ScanState {
  std::vector<ScannedLine> lines;
  std::vector<ParseDiagnostic> diags;
  bool unit_is_tab = false;
  int unit_width = 2;
  bool unit_decided = false;
  int first_indented_line = 0;
  bool final_newline = true;
};

inline void scan_document(std::string_view text, const ParseOptions& options,
                          ScanState& st) {
  switch (options.indent) {
    case IndentUnit::autodetect:
      break;
    case IndentUnit::two_spaces:
      st.unit_decided = true;
      break;
    case IndentUnit::spaces:
      st.unit_decided = true;
      st.unit_width = options.indent_width > 0 ? options.indent_width : 2;
      break;
    case IndentUnit::tab:
      st.unit_decided = true;
      st.unit_is_tab = true;
      st.unit_width = 1;
      break;
  }

  st.final_newline = !text.empty() && text.back() == '\n';

  int line_no = 0;
  int prev_level = -1;
  size_t pos = 0;
  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (raw.empty() && nl == std::string_view::npos) break;

    ScannedLine line;
    line.line_no = line_no;
    if (!raw.empty() && raw.back() == '\r') {
      line.crlf = true;
      raw.remove_suffix(1);
    }

    auto cps = decode_utf8(raw);
    if (!cps) {
      st.diags.push_back({line_no, Severity::error, DiagCode::InvalidEncoding,
                          "line is not valid UTF-8"});
      line.failed = true;
      st.lines.push_back(std::move(line));
      continue;
    }

    if (trim_cps(*cps).empty()) {
      line.blank = true;
      st.lines.push_back(std::move(line));
      continue;
    }

    size_t indent_end = 0;
    bool has_space = false, has_tab = false;
    while (indent_end < cps->size() &&
           ((*cps)[indent_end] == U' ' || (*cps)[indent_end] == U'\t')) {
      ((*cps)[indent_end] == U' ' ? has_space : has_tab) = true;
      ++indent_end;
    }
    line.indent_width = static_cast<int>(indent_end);
    line.indent_tabs = has_tab;
    line.content = cps->substr(indent_end);
    line.trailing_ws = !line.content.empty() && is_space_cp(line.content.back());

    if (has_space && has_tab) {
      st.diags.push_back({line_no, Severity::error, DiagCode::MixedIndent,
                          "tabs and spaces mixed in one indent"});
      line.failed = true;
      line.level = prev_level + 1;
      prev_level = line.level;
      st.lines.push_back(std::move(line));
      continue;
    }

    if (indent_end > 0 && !st.unit_decided) {
      st.unit_is_tab = has_tab;
      st.unit_width = has_tab ? 1 : 2;
      st.unit_decided = true;
    }
    if (indent_end > 0 && st.first_indented_line == 0)
      st.first_indented_line = line_no;

    if (indent_end > 0 && has_tab != st.unit_is_tab) {
      st.diags.push_back({line_no, Severity::error, DiagCode::MixedIndent,
                          st.unit_is_tab ? "space indent in a tab-indented document"
                                         : "tab indent in a space-indented document"});
      line.failed = true;
      line.level = prev_level + 1;
      prev_level = line.level;
      st.lines.push_back(std::move(line));
      continue;
    }

    if (line.indent_width % st.unit_width != 0) {
      st.diags.push_back({line_no, Severity::error, DiagCode::RaggedIndent,
                          "indent of " + std::to_string(line.indent_width) +
                              " is not a multiple of the unit " +
                              std::to_string(st.unit_width)});
      line.failed = true;
      line.level = prev_level + 1;
      prev_level = line.level;
      st.lines.push_back(std::move(line));
      continue;
    }

    line.level = line.indent_width / st.unit_width;
    if (line.level > prev_level + 1) {
      st.diags.push_back({line_no, Severity::error, DiagCode::IndentJump,
                          "indent jumps from level " + std::to_string(prev_level) +
                              " to level " + std::to_string(line.level)});
      line.failed = true;
      line.level = prev_level + 1;
    }
    prev_level = line.level;
    st.lines.push_back(std::move(line));
  }
}

struct ParsedLine {
  int level = 0;
  Node node;
};

// Lines come level-checked, so assembly is a simple stack walk.
inline std::vector<Node> assemble_forest(std::vector<ParsedLine>& lines) {
  std::vector<Node> roots;
  std::vector<std::vector<Node>*> open;  // open[k] = children list at level k
  open.push_back(&roots);
  for (auto& line : lines) {
    open.resize(line.level + 1);
    open[line.level]->push_back(std::move(line.node));
    open.push_back(&open[line.level]->back().children);
  }
  return roots;
}

}  // namespace detail

/// Parses one node line (indentation already stripped). Warnings may
/// accompany a successful parse; errors never do.
inline NodeParse parse_node_line(std::string_view line, int line_number = 1) {
  NodeParse result;
  auto cps = decode_utf8(line);
  if (!cps) {
    result.diagnostics.push_back({line_number, Severity::error,
                                  DiagCode::InvalidEncoding,
                                  "line is not valid UTF-8"});
    return result;
  }
  if (detail::trim_cps(*cps).empty()) {
    result.diagnostics.push_back({line_number, Severity::error,
                                  DiagCode::EmptyOperand, "empty node line"});
    return result;
  }
  auto node = detail::parse_node_cps(*cps, line_number, result.diagnostics);
  if (node && !has_errors(result.diagnostics)) result.node = std::move(*node);
  return result;
}

/// Parses a whole document. On success the forest is present and the
/// diagnostics hold warnings at most; on failure the forest is absent and
/// the diagnostics hold at least one error.
inline ParseResult parse_forest(std::string_view text,
                                const ParseOptions& options = {}) {
  ParseResult result;
  detail::ScanState st;
  detail::scan_document(text, options, st);
  result.diagnostics = std::move(st.diags);

  std::vector<detail::ParsedLine> parsed;
  bool any_content = false;
  for (auto& line : st.lines) {
    if (line.blank || line.failed) {
      any_content |= line.failed;
      continue;
    }
    any_content = true;
    auto node = detail::parse_node_cps(line.content, line.line_no,
                                       result.diagnostics);
    if (node) parsed.push_back({line.level, std::move(*node)});
  }

  if (!any_content) {
    result.diagnostics.push_back({1, Severity::error, DiagCode::EmptyDocument,
                                  "no non-blank lines"});
    return result;
  }
  if (has_errors(result.diagnostics)) return result;

  CausalForest forest;
  forest.case_id = options.case_id;
  forest.roots = detail::assemble_forest(parsed);
  result.forest = std::move(forest);
  return result;
}

}  // namespace casetree
