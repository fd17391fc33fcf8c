#pragma once

#include <string>
#include <vector>

namespace casetree {

enum class Severity { error, warning };

enum class DiagCode {
  // parse errors
  IndentJump,          // level deeper than parent chain + 1
  MixedIndent,         // tabs and spaces mixed within one document
  RaggedIndent,        // indent width not a multiple of the unit
  EmptyDocument,       // no non-blank lines
  EmptyOperand,        // missing entity around an operator or after H:
  MultipleTests,       // more than one = on a line
  UnexpectedOperator,  // @ or / left of =, or ＊ chain as a polarity value
  InvalidEncoding,     // line is not valid UTF-8
  // format warnings
  NonCanonicalSymbol,      // halfwidth * used for ＊
  NonCanonicalSpacing,     // operator spacing differs from the canonical form
  NonCanonicalIndent,      // indent unit other than two spaces
  NonCanonicalLineEnding,  // CRLF input
  TrailingWhitespace,
  NonCanonicalFormat,  // any other divergence (blank lines, final newline)
  // thesaurus warnings
  DuplicateMapping,  // surface listed twice; last wins
  MappingCycle,      // representative chain loops
  MalformedLine,     // not a two-column TSV row
};

inline const char* diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::IndentJump:             return "IndentJump";
    case DiagCode::MixedIndent:            return "MixedIndent";
    case DiagCode::RaggedIndent:           return "RaggedIndent";
    case DiagCode::EmptyDocument:          return "EmptyDocument";
    case DiagCode::EmptyOperand:           return "EmptyOperand";
    case DiagCode::MultipleTests:          return "MultipleTests";
    case DiagCode::UnexpectedOperator:     return "UnexpectedOperator";
    case DiagCode::InvalidEncoding:        return "InvalidEncoding";
    case DiagCode::NonCanonicalSymbol:     return "NonCanonicalSymbol";
    case DiagCode::NonCanonicalSpacing:    return "NonCanonicalSpacing";
    case DiagCode::NonCanonicalIndent:     return "NonCanonicalIndent";
    case DiagCode::NonCanonicalLineEnding: return "NonCanonicalLineEnding";
    case DiagCode::TrailingWhitespace:     return "TrailingWhitespace";
    case DiagCode::NonCanonicalFormat:     return "NonCanonicalFormat";
    case DiagCode::DuplicateMapping:       return "DuplicateMapping";
    case DiagCode::MappingCycle:           return "MappingCycle";
    case DiagCode::MalformedLine:          return "MalformedLine";
  }
  return "?";
}

struct ParseDiagnostic {
  int line = 0;  // 1-based line in the source text
  Severity severity = Severity::error;
  DiagCode code = DiagCode::EmptyDocument;
  std::string message;

  bool operator==(const ParseDiagnostic&) const = default;
};

inline bool has_errors(const std::vector<ParseDiagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

inline std::string format_diagnostic(const ParseDiagnostic& d) {
  std::string out = "line ";
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
