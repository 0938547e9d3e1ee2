#include "rerc/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cctype>
#include <stdexcept>

namespace rerc::text {

namespace {

// Decodes one code point at byte offset i, advancing i. Ill-formed bytes map
// to U+FFFD so offsets always progress.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  UChar32 c = 0;
  int32_t idx = static_cast<int32_t>(i);
  const auto len = static_cast<int32_t>(s.size());
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), idx, len, c);
  i = static_cast<std::size_t>(idx);
  return c < 0 ? U'�' : static_cast<char32_t>(c);
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *n;
}

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) out.push_back(next_code_point(utf8, i));
  return out;
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[4];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, 4, static_cast<UChar32>(c), error);
    if (error) continue;
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

bool is_punct_or_symbol(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

std::string normalize(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString composed = nfc().normalize(u, status);
  composed.foldCase();
  composed = nfc().normalize(composed, status);
  if (U_FAILURE(status)) composed = u;

  std::string folded;
  composed.toUTF8String(folded);

  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < folded.size()) {
    const std::size_t start = i;
    const char32_t c = next_code_point(folded, i);
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.append(folded, start, i - start);
  }
  return out;
}

std::u32string normalize_u32(std::string_view s) { return to_u32(normalize(s)); }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    // Skip whitespace.
    std::size_t piece_begin = i;
    while (piece_begin < s.size()) {
      std::size_t next = piece_begin;
      if (!is_space(next_code_point(s, next))) break;
      piece_begin = next;
    }
    if (piece_begin >= s.size()) break;

    // Walk the non-whitespace run, remembering the first and last
    // non-punctuation code points.
    std::size_t cursor = piece_begin;
    std::size_t tok_begin = std::string_view::npos;
    std::size_t tok_end = std::string_view::npos;
    while (cursor < s.size()) {
      const std::size_t cp_begin = cursor;
      const char32_t c = next_code_point(s, cursor);
      if (is_space(c)) {
        cursor = cp_begin;
        break;
      }
      if (!is_punct_or_symbol(c)) {
        if (tok_begin == std::string_view::npos) tok_begin = cp_begin;
        tok_end = cursor;
      }
    }
    if (tok_begin != std::string_view::npos) tokens.push_back(Token{tok_begin, tok_end});
    i = cursor;
  }
  return tokens;
}

std::size_t count_whitespace_tokens(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const bool space = is_space(next_code_point(s, i));
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

std::size_t prefix_of_whitespace_tokens(std::string_view s, std::size_t n) {
  std::size_t seen = 0;
  bool in_token = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t at = i;
    const bool space = is_space(next_code_point(s, i));
    if (space && in_token && seen == n) return at;
    if (!space && !in_token) ++seen;
    in_token = !space;
  }
  return s.size();
}

bool starts_with_uppercase(std::string_view token) {
  if (token.empty()) return false;
  std::size_t i = 0;
  const auto c = static_cast<UChar32>(next_code_point(token, i));
  return u_isupper(c) || u_istitle(c);
}

bool is_all_digits(std::string_view token) {
  if (token.empty()) return false;
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace rerc::text
