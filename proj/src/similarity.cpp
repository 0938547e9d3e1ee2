#include "rerc/similarity.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

namespace {

// Symbols outside the Unicode range; used for tokens absent from a needle.
constexpr char32_t kForeignToken = 0x110000;

std::vector<std::u32string> normalized_tokens(std::string_view s) {
  std::vector<std::u32string> out;
  for (const auto& tok : text::tokenize(s)) out.push_back(text::normalize_u32(tok.view(s)));
  return out;
}

}  // namespace

void SimilarityConfig::validate() const {
  if (!(sigma_entity >= 0.0 && sigma_entity <= 1.0)) throw ConfigError("sigma_entity must be in [0, 1]");
  if (!(sigma_relation >= 0.0 && sigma_relation <= 1.0)) throw ConfigError("sigma_relation must be in [0, 1]");
}

LcsPattern::LcsPattern(std::u32string pattern) : pattern_(std::move(pattern)) {
  if (pattern_.size() > 64) return;
  std::map<char32_t, uint64_t> masks;
  for (std::size_t i = 0; i < pattern_.size(); ++i) masks[pattern_[i]] |= uint64_t{1} << i;
  masks_.assign(masks.begin(), masks.end());
}

uint64_t LcsPattern::mask_for(char32_t c) const {
  auto it = std::lower_bound(masks_.begin(), masks_.end(), c,
                             [](const auto& entry, char32_t key) { return entry.first < key; });
  return it != masks_.end() && it->first == c ? it->second : 0;
}

std::size_t LcsPattern::lcs(std::u32string_view text) const {
  const std::size_t m = pattern_.size();
  if (m == 0 || text.empty()) return 0;
  if (m > 64) return detail::lcs_length_dp(pattern_, text);

  // Zero bits of v mark pattern positions consumed by the current LCS.
  uint64_t v = ~uint64_t{0};
  for (char32_t c : text) {
    const uint64_t u = v & mask_for(c);
    v = (v + u) | (v - u);
  }
  const uint64_t low = m == 64 ? ~uint64_t{0} : (uint64_t{1} << m) - 1;
  return m - static_cast<std::size_t>(std::popcount(v & low));
}

namespace detail {

std::size_t lcs_length_dp(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (char32_t ca : a) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = ca == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) return 0;
  if (a.size() <= 64) return LcsPattern(std::u32string(a)).lcs(b);
  if (b.size() <= 64) return LcsPattern(std::u32string(b)).lcs(a);
  return detail::lcs_length_dp(a, b);
}

namespace {

// Both strings mapped to comparable symbol sequences for the granularity.
std::pair<std::u32string, std::u32string> symbolize(std::string_view a, std::string_view b, Granularity g) {
  if (g == Granularity::Character) return {text::normalize_u32(a), text::normalize_u32(b)};
  std::map<std::u32string, char32_t> ids;
  auto encode = [&ids](std::string_view s) {
    std::u32string out;
    for (auto& tok : normalized_tokens(s)) {
      auto [it, inserted] = ids.emplace(std::move(tok), static_cast<char32_t>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  auto sa = encode(a);
  auto sb = encode(b);
  return {std::move(sa), std::move(sb)};
}

}  // namespace

std::size_t lcs_length(std::string_view a, std::string_view b, const SimilarityConfig& config) {
  auto [sa, sb] = symbolize(a, b, config.granularity);
  return lcs_length(sa, sb);
}

double lcs_f1(std::size_t lcs, std::size_t len_a, std::size_t len_b) {
  if (lcs == 0 || len_a == 0 || len_b == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(len_a);
  const double r = static_cast<double>(lcs) / static_cast<double>(len_b);
  return 2.0 * p * r / (p + r);
}

double lcs_f1(std::string_view a, std::string_view b, const SimilarityConfig& config) {
  auto [sa, sb] = symbolize(a, b, config.granularity);
  return lcs_f1(lcs_length(sa, sb), sa.size(), sb.size());
}

PreparedText::PreparedText(std::string_view text) : text_(text) {
  const auto toks = text::tokenize(text_);
  tokens_.reserve(toks.size());
  for (const auto& t : toks) tokens_.push_back(Piece{t.begin, t.end, text::normalize_u32(t.view(text_))});
  for (std::size_t k = 0; k + 1 < tokens_.size(); ++k) {
    const std::string_view gap = std::string_view(text_).substr(tokens_[k].end, tokens_[k + 1].begin - tokens_[k].end);
    std::u32string g = text::normalize_u32(gap);
    // normalize() trims, so a pure-whitespace gap comes back empty.
    if (g.empty()) {
      g = U" ";
    } else {
      const bool lead = !gap.empty() && text::is_space(static_cast<unsigned char>(gap.front()));
      const bool trail = !gap.empty() && text::is_space(static_cast<unsigned char>(gap.back()));
      if (lead) g.insert(g.begin(), U' ');
      if (trail) g.push_back(U' ');
    }
    gaps_.push_back(std::move(g));
  }
}

Needle::Needle(std::string_view needle, Granularity granularity)
    : granularity_(granularity), pattern_(std::u32string{}) {
  if (granularity == Granularity::Character) {
    pattern_ = LcsPattern(text::normalize_u32(needle));
    return;
  }
  std::map<std::u32string, char32_t> ids;
  std::u32string symbols;
  for (auto& tok : normalized_tokens(needle)) {
    auto [it, inserted] = ids.emplace(std::move(tok), static_cast<char32_t>(ids.size()));
    symbols.push_back(it->second);
  }
  vocabulary_.assign(ids.begin(), ids.end());
  pattern_ = LcsPattern(std::move(symbols));
}

char32_t Needle::token_symbol(const std::u32string& token) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token,
                             [](const auto& entry, const std::u32string& key) { return entry.first < key; });
  return it != vocabulary_.end() && it->first == token ? it->second : kForeignToken;
}

std::optional<Match> Needle::locate(const PreparedText& haystack, double threshold) const {
  const std::size_t n = pattern_.size();
  if (n == 0) return std::nullopt;

  std::optional<Match> best;
  std::size_t best_len = 0;
  const auto& toks = haystack.tokens_;
  std::u32string window;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    window.clear();
    for (std::size_t j = i; j < toks.size(); ++j) {
      if (granularity_ == Granularity::Character) {
        if (j > i) window += haystack.gaps_[j - 1];
        window += toks[j].normalized;
      } else {
        window.push_back(token_symbol(toks[j].normalized));
      }
      const std::size_t len = window.size();
      if (2 * len > 3 * n) break;
      if (2 * len < n) continue;
      const double score = lcs_f1(pattern_.lcs(window), n, len);
      if (score < threshold) continue;
      const bool better = !best || score > best->score ||
                          (score == best->score && toks[i].begin == best->begin && len < best_len);
      if (better) {
        best = Match{toks[i].begin, toks[j].end, score};
        best_len = len;
      }
    }
  }
  return best;
}

std::optional<Match> fuzzy_locate(std::string_view needle, std::string_view haystack, double threshold,
                                  const SimilarityConfig& config) {
  return Needle(needle, config.granularity).locate(PreparedText(haystack), threshold);
}

}  // namespace rerc
