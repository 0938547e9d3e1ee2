#pragma once

/// \file text.hpp
/// UTF-8 helpers shared by the matching and extraction layers: Unicode
/// normalization (NFC + case folding + whitespace collapse), code-point
/// conversion and punctuation-stripping tokenization with byte spans.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rerc::text {

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view s);

/// NFC, Unicode case fold, whitespace runs collapsed to one space, trimmed.
std::string normalize(std::string_view s);
std::u32string normalize_u32(std::string_view s);

/// A token of the source string, as half-open byte offsets. Leading and
/// trailing punctuation/symbol characters are excluded from the span.
struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::string_view view(std::string_view source) const { return source.substr(begin, end - begin); }
};

/// Whitespace-delimited tokens with edge punctuation stripped; tokens that are
/// nothing but punctuation are dropped.
std::vector<Token> tokenize(std::string_view s);

/// Number of whitespace-separated pieces (the context budget unit).
std::size_t count_whitespace_tokens(std::string_view s);

/// Byte offset just past the n-th whitespace-separated piece (n >= 1).
std::size_t prefix_of_whitespace_tokens(std::string_view s, std::size_t n);

bool starts_with_uppercase(std::string_view token);
bool is_all_digits(std::string_view token);

/// True for code points in the Unicode punctuation or symbol categories.
bool is_punct_or_symbol(char32_t c);
bool is_space(char32_t c);

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace rerc::text
