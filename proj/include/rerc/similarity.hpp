#pragma once

/// \file similarity.hpp
/// Fuzzy string matching by longest common subsequence. All public entry
/// points normalize their inputs first (NFC, case fold, whitespace collapse)
/// and then work either on code points or on whole tokens.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rerc {

enum class Granularity { Character, Token };

struct SimilarityConfig {
  double sigma_entity = 0.8;     // entity-location threshold
  double sigma_relation = 0.65;  // relation-location threshold
  Granularity granularity = Granularity::Character;

  /// Throws ConfigError when a threshold is outside [0, 1].
  void validate() const;
};

/// Precomputed bit-parallel matcher for one fixed sequence. Sequences up to 64
/// symbols use the bit-vector recurrence (one word operation per symbol of the
/// other string); longer ones fall back to the two-row dynamic program.
class LcsPattern {
 public:
  explicit LcsPattern(std::u32string pattern);

  std::size_t lcs(std::u32string_view text) const;
  std::size_t size() const noexcept { return pattern_.size(); }
  const std::u32string& symbols() const noexcept { return pattern_; }

 private:
  uint64_t mask_for(char32_t c) const;

  std::u32string pattern_;
  std::vector<std::pair<char32_t, uint64_t>> masks_;  // sorted by symbol
};

namespace detail {
/// Quadratic-time, linear-space reference dynamic program.
std::size_t lcs_length_dp(std::u32string_view a, std::u32string_view b);
}  // namespace detail

/// LCS length over raw symbol sequences (no normalization).
std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

/// LCS length of two strings at the configured granularity.
std::size_t lcs_length(std::string_view a, std::string_view b, const SimilarityConfig& config = {});

/// F1 of an LCS against both lengths; 0 when either length is 0.
double lcs_f1(std::size_t lcs, std::size_t len_a, std::size_t len_b);
double lcs_f1(std::string_view a, std::string_view b, const SimilarityConfig& config = {});

/// A located window: half-open byte offsets into the haystack.
struct Match {
  std::size_t begin = 0;
  std::size_t end = 0;
  double score = 0.0;
};

/// A haystack tokenized and normalized once, for repeated lookups.
class PreparedText {
 public:
  explicit PreparedText(std::string_view text);

  const std::string& text() const noexcept { return text_; }
  std::size_t token_count() const noexcept { return tokens_.size(); }

 private:
  friend class Needle;

  struct Piece {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::u32string normalized;
  };

  std::string text_;
  std::vector<Piece> tokens_;
  std::vector<std::u32string> gaps_;  // gaps_[k] sits between tokens_[k] and tokens_[k + 1]
};

/// A search string prepared for one granularity.
class Needle {
 public:
  Needle(std::string_view needle, Granularity granularity);

  bool empty() const noexcept { return pattern_.size() == 0; }
  std::size_t size() const noexcept { return pattern_.size(); }

  /// Best token-aligned window of the haystack whose length is within 50% of
  /// the needle's and whose lcs_f1 reaches the threshold. Highest score wins;
  /// ties go to the leftmost start, then the shorter window.
  std::optional<Match> locate(const PreparedText& haystack, double threshold) const;

 private:
  char32_t token_symbol(const std::u32string& token) const;

  Granularity granularity_;
  LcsPattern pattern_;
  std::vector<std::pair<std::u32string, char32_t>> vocabulary_;  // token mode only, sorted
};

std::optional<Match> fuzzy_locate(std::string_view needle, std::string_view haystack, double threshold,
                                  const SimilarityConfig& config = {});

}  // namespace rerc
