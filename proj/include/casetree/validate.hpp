#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "casetree/parse.hpp"
#include "casetree/serialize.hpp"

namespace casetree {

/// Collects every diagnostic for a document instead of stopping at the
/// first error. When the document parses, warnings flag each divergence
/// from the canonical form, so an empty result means the text is exactly
/// what serialize_forest would emit.
inline std::vector<ParseDiagnostic> validate(std::string_view text,
                                             const ParseOptions& options = {}) {
  detail::ScanState st;
  detail::scan_document(text, options, st);
  std::vector<ParseDiagnostic> diags = std::move(st.diags);

  struct LineNode {
    const detail::ScannedLine* line;
    Node node;
  };
  std::vector<LineNode> nodes;
  std::vector<detail::ParsedLine> parsed;
  bool any_content = false;
  for (const auto& line : st.lines) {
    if (line.blank || line.failed) {
      any_content |= line.failed;
      continue;
    }
    any_content = true;
    auto node = detail::parse_node_cps(line.content, line.line_no, diags);
    if (node) {
      nodes.push_back({&line, *node});
      parsed.push_back({line.level, std::move(*node)});
    }
  }
  if (!any_content) {
    diags.push_back({1, Severity::error, DiagCode::EmptyDocument,
                     "no non-blank lines"});
  }

  if (has_errors(diags)) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const auto& a, const auto& b) { return a.line < b.line; });
    return diags;
  }

  // The document parses; report everything the canonical form would change.
  std::set<int> alias_lines;
  for (const auto& d : diags) {
    if (d.code == DiagCode::NonCanonicalSymbol) alias_lines.insert(d.line);
  }

  for (const auto& line : st.lines) {
    if (line.crlf) {
      diags.push_back({line.line_no, Severity::warning,
                       DiagCode::NonCanonicalLineEnding,
                       "CRLF line ending (canonical form uses LF)"});
      break;
    }
  }
  for (const auto& line : st.lines) {
    if (line.blank) {
      diags.push_back({line.line_no, Severity::warning,
                       DiagCode::NonCanonicalFormat, "blank line"});
    } else if (line.trailing_ws) {
      diags.push_back({line.line_no, Severity::warning,
                       DiagCode::TrailingWhitespace, "trailing whitespace"});
    }
  }
  if (st.first_indented_line > 0 && (st.unit_is_tab || st.unit_width != 2)) {
    diags.push_back({st.first_indented_line, Severity::warning,
                     DiagCode::NonCanonicalIndent,
                     st.unit_is_tab ? "tab indentation (canonical unit is two spaces)"
                                    : "indent unit is not two spaces"});
  }
  for (const auto& ln : nodes) {
    std::u32string stripped = ln.line->content;
    while (!stripped.empty() && detail::is_space_cp(stripped.back()))
      stripped.pop_back();
    if (to_utf8(stripped) != serialize_node_line(ln.node) &&
        !alias_lines.count(ln.line->line_no)) {
      diags.push_back({ln.line->line_no, Severity::warning,
                       DiagCode::NonCanonicalSpacing,
                       "spacing differs from the canonical form"});
    }
  }
  if (!st.final_newline) {
    diags.push_back({st.lines.empty() ? 1 : st.lines.back().line_no,
                     Severity::warning, DiagCode::NonCanonicalFormat,
                     "missing final newline"});
  }

  if (diags.empty()) {
    // Safety net: anything uncovered above still breaks the equivalence.
    CausalForest forest;
    forest.roots = detail::assemble_forest(parsed);
    if (serialize_forest(forest) != text) {
      diags.push_back({1, Severity::warning, DiagCode::NonCanonicalFormat,
                       "document differs from its canonical form"});
    }
  }

  std::stable_sort(diags.begin(), diags.end(),
                   [](const auto& a, const auto& b) { return a.line < b.line; });
  return diags;
}

}  // namespace casetree
