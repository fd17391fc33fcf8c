#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Minimal UTF-8 handling: decoding to code points, encoding back, and a
// compatibility fold for the width variants common in Japanese clinical text
// (fullwidth ASCII, ideographic space, halfwidth katakana). Edit distance and
// length normalization elsewhere operate on code points, never bytes.

namespace casetree {

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string to_utf8(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

/// Decodes UTF-8; nullopt on malformed input (overlong forms, surrogates,
/// truncated sequences, out-of-range code points).
inline std::optional<std::u32string> decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return std::nullopt;
    }
    if (i + len > text.size()) return std::nullopt;
    for (int k = 1; k < len; ++k) {
      unsigned char b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) return std::nullopt;
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len]) return std::nullopt;            // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;  // surrogate
    if (cp > 0x10FFFF) return std::nullopt;
    out.push_back(cp);
    i += len;
  }
  return out;
}

namespace detail {

// Halfwidth katakana U+FF66..U+FF9D to the fullwidth block.
inline char32_t halfwidth_kana_base(char32_t cp) {
  static constexpr char32_t table[] = {
      0x30F2,  // ｦ
      0x30A1, 0x30A3, 0x30A5, 0x30A7, 0x30A9,          // ｧｨｩｪｫ
      0x30E3, 0x30E5, 0x30E7, 0x30C3,                  // ｬｭｮｯ
      0x30FC,                                          // ｰ
      0x30A2, 0x30A4, 0x30A6, 0x30A8, 0x30AA,          // ｱ..ｵ
      0x30AB, 0x30AD, 0x30AF, 0x30B1, 0x30B3,          // ｶ..ｺ
      0x30B5, 0x30B7, 0x30B9, 0x30BB, 0x30BD,          // ｻ..ｿ
      0x30BF, 0x30C1, 0x30C4, 0x30C6, 0x30C8,          // ﾀ..ﾄ
      0x30CA, 0x30CB, 0x30CC, 0x30CD, 0x30CE,          // ﾅ..ﾉ
      0x30CF, 0x30D2, 0x30D5, 0x30D8, 0x30DB,          // ﾊ..ﾎ
      0x30DE, 0x30DF, 0x30E0, 0x30E1, 0x30E2,          // ﾏ..ﾓ
      0x30E4, 0x30E6, 0x30E8,                          // ﾔﾕﾖ
      0x30E9, 0x30EA, 0x30EB, 0x30EC, 0x30ED,          // ﾗ..ﾛ
      0x30EF, 0x30F3,                                  // ﾜﾝ
  };
  return table[cp - 0xFF66];
}

inline bool kana_takes_dakuten(char32_t cp) {
  switch (cp) {
    case 0x30AB: case 0x30AD: case 0x30AF: case 0x30B1: case 0x30B3:  // カ行
    case 0x30B5: case 0x30B7: case 0x30B9: case 0x30BB: case 0x30BD:  // サ行
    case 0x30BF: case 0x30C1: case 0x30C4: case 0x30C6: case 0x30C8:  // タ行
    case 0x30CF: case 0x30D2: case 0x30D5: case 0x30D8: case 0x30DB:  // ハ行
    case 0x30A6:                                                      // ウ → ヴ
      return true;
    default:
      return false;
  }
}

inline bool kana_takes_handakuten(char32_t cp) {
  return cp >= 0x30CF && cp <= 0x30DB && (cp - 0x30CF) % 3 == 0;  // ハ行
}

}  // namespace detail

/// Compatibility fold: fullwidth ASCII to ASCII, ideographic space to space,
/// halfwidth katakana to fullwidth (voiced marks composed). Identity on
/// everything else; not a full Unicode normalization.
inline std::u32string compat_fold(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (cp == 0x3000) {
      out.push_back(0x20);
    } else if (cp >= 0xFF01 && cp <= 0xFF5E) {
      out.push_back(cp - 0xFEE0);
    } else if (cp == 0xFF61) {
      out.push_back(0x3002);
    } else if (cp == 0xFF62) {
      out.push_back(0x300C);
    } else if (cp == 0xFF63) {
      out.push_back(0x300D);
    } else if (cp == 0xFF64) {
      out.push_back(0x3001);
    } else if (cp == 0xFF65) {
      out.push_back(0x30FB);
    } else if (cp >= 0xFF66 && cp <= 0xFF9D) {
      out.push_back(detail::halfwidth_kana_base(cp));
    } else if (cp == 0xFF9E) {  // ﾞ
      if (!out.empty() && detail::kana_takes_dakuten(out.back())) {
        out.back() = out.back() == 0x30A6 ? 0x30F4 : out.back() + 1;
      } else {
        out.push_back(0x309B);
      }
    } else if (cp == 0xFF9F) {  // ﾟ
      if (!out.empty() && detail::kana_takes_handakuten(out.back())) {
        out.back() += 2;
      } else {
        out.push_back(0x309C);
      }
    } else {
      out.push_back(cp);
    }
  }
  return out;
}

inline std::string compat_fold_utf8(std::string_view text) {
  auto cps = decode_utf8(text);
  if (!cps) return std::string(text);
  return to_utf8(compat_fold(*cps));
}

/// Code-point length of a UTF-8 string (bytes counted as-is on bad input).
inline size_t codepoint_length(std::string_view text) {
  auto cps = decode_utf8(text);
  return cps ? cps->size() : text.size();
}

}  // namespace casetree
