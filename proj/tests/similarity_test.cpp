#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <vector>

#include "rerc/errors.hpp"
#include "rerc/similarity.hpp"
#include "rerc/text.hpp"

namespace rerc {
namespace {

// Textbook recursion with a memo table; deliberately independent of the
// bit-parallel and two-row implementations.
std::size_t naive_lcs(std::u32string_view a, std::u32string_view b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size() || j == b.size()) return 0;
    int& m = memo[i][j];
    if (m >= 0) return m;
    if (a[i] == b[j]) return m = 1 + go(i + 1, j + 1);
    return m = std::max(go(i + 1, j), go(i, j + 1));
  };
  return static_cast<std::size_t>(go(0, 0));
}

std::u32string random_string(std::mt19937& rng, std::size_t max_len, char32_t alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet) - 1);
  std::u32string s(len(rng), U'a');
  for (auto& c : s) c = U'a' + static_cast<char32_t>(sym(rng));
  return s;
}

TEST(Lcs, MatchesNaiveRecursionOnShortStrings) {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_string(rng, 12, 4);
    const auto b = random_string(rng, 12, 4);
    ASSERT_EQ(lcs_length(a, b), naive_lcs(a, b));
  }
}

TEST(Lcs, BitParallelAgreesWithDpAcrossTheWordBoundary) {
  std::mt19937 rng(11);
  for (std::size_t len : {1u, 31u, 63u, 64u, 65u, 100u, 200u}) {
    for (int i = 0; i < 30; ++i) {
      std::u32string a = random_string(rng, len, 6);
      std::u32string b = random_string(rng, len + 20, 6);
      EXPECT_EQ(LcsPattern(a).lcs(b), detail::lcs_length_dp(a, b)) << "len " << len;
      EXPECT_EQ(lcs_length(a, b), lcs_length(b, a));
    }
  }
}

TEST(Lcs, EdgeCases) {
  EXPECT_EQ(lcs_length(U"", U"abc"), 0u);
  EXPECT_EQ(lcs_length(U"abc", U""), 0u);
  EXPECT_EQ(lcs_length(U"abc", U"abc"), 3u);
  EXPECT_EQ(lcs_length(U"abc", U"xyz"), 0u);
}

TEST(LcsF1, MontreuilFixture) {
  // lcs("montreuil", "montreuil-sous-bois") = 9; 2 * 9 / (9 + 19)
  const auto a = text::normalize_u32("Montreuil");
  const auto b = text::normalize_u32("Montreuil-sous-Bois");
  ASSERT_EQ(naive_lcs(a, b), 9u);
  EXPECT_NEAR(lcs_f1("Montreuil", "Montreuil-sous-Bois"), 18.0 / 28.0, 1e-12);
  EXPECT_NEAR(lcs_f1("Montreuil", "Montreuil-sous-Bois"), 0.6429, 1e-4);
}

TEST(LcsF1, DegenerateLengths) {
  EXPECT_EQ(lcs_f1(0, 0, 5), 0.0);
  EXPECT_EQ(lcs_f1(0, 5, 0), 0.0);
  EXPECT_EQ(lcs_f1("", ""), 0.0);
  EXPECT_EQ(lcs_f1("same", "SAME"), 1.0);
}

TEST(LcsF1, TokenGranularityCountsWholeWords) {
  SimilarityConfig cfg;
  cfg.granularity = Granularity::Token;
  // tokens {kevin ledanois} vs {yvon ledanois}: one shared token of two each
  EXPECT_NEAR(lcs_f1("Kevin Ledanois", "Yvon Ledanois", cfg), 0.5, 1e-12);
  EXPECT_EQ(lcs_length("the son of", "son of the", cfg), 2u);
}

TEST(LcsF1, KevinAgainstYvonClearsEntityThreshold) {
  // lcs("kévin ledanois", "yvon ledanois") = "v" + "n ledanois" = 11; 22 / 27
  const auto a = text::normalize_u32("Kévin Ledanois");
  const auto b = text::normalize_u32("Yvon Ledanois");
  const double expected = 2.0 * static_cast<double>(naive_lcs(a, b)) / static_cast<double>(a.size() + b.size());
  EXPECT_NEAR(lcs_f1("Kévin Ledanois", "Yvon Ledanois"), expected, 1e-12);
  EXPECT_GE(expected, 0.8);
}

TEST(Config, RejectsOutOfRangeThresholds) {
  SimilarityConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.sigma_entity = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.sigma_entity = 0.8;
  cfg.sigma_relation = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(FuzzyLocate, ExactMentionSpansTheSubstring) {
  const std::string s = "Kévin Ledanois is the son of former footballer Yvon Ledanois.";
  const auto m = fuzzy_locate("Yvon Ledanois", s, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(s.substr(m->begin, m->end - m->begin), "Yvon Ledanois");
  EXPECT_DOUBLE_EQ(m->score, 1.0);
}

TEST(FuzzyLocate, ReturnsNothingBelowThreshold) {
  EXPECT_FALSE(fuzzy_locate("Chano Urueta", "Thayagam is a 1996 Indian film.", 0.8));
  EXPECT_FALSE(fuzzy_locate("", "anything", 0.5));
}

TEST(FuzzyLocate, TolerantOfCaseAndPunctuation) {
  const std::string s = "directed by FRANÇOIS TRUFFAUT.";
  const auto m = fuzzy_locate("François Truffaut", s, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(s.substr(m->begin, m->end - m->begin), "FRANÇOIS TRUFFAUT");
}

TEST(FuzzyLocate, ScoreIsTheWindowF1) {
  const std::string s = "He was born in Paris.";
  const auto m = fuzzy_locate("born", s, 0.65);
  ASSERT_TRUE(m);
  EXPECT_EQ(s.substr(m->begin, m->end - m->begin), "born");
  const auto n = fuzzy_locate("place of birth", "Yvon Ledanois was born in Montreuil-sous-Bois.", 0.0);
  ASSERT_TRUE(n);
  EXPECT_GE(n->score, 0.0);
  EXPECT_LE(n->score, 1.0);
}

TEST(FuzzyLocate, PrefersLeftmostOnTies) {
  const std::string s = "Paris and Paris";
  const auto m = fuzzy_locate("Paris", s, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->begin, 0u);
}

TEST(FuzzyLocate, WindowsStayWithinHalfToOneAndAHalfTheNeedle) {
  // a needle of 4 symbols cannot be matched by a window of 12
  EXPECT_FALSE(fuzzy_locate("abcd", "abcdabcdabcd", 0.99));
  const auto m = fuzzy_locate("abcd", "xx abcd yy", 0.99);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->end - m->begin, 4u);
}

TEST(FuzzyLocate, NeedleReuseGivesTheSameAnswer) {
  const Needle needle("Max Varnel", Granularity::Character);
  const PreparedText hay("Top Floor Girl is a 1959 British drama film directed by Max Varnel.");
  const auto a = needle.locate(hay, 0.8);
  const auto b = fuzzy_locate("Max Varnel", hay.text(), 0.8);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->begin, b->begin);
  EXPECT_EQ(a->end, b->end);
  EXPECT_DOUBLE_EQ(a->score, b->score);
}

TEST(FuzzyLocate, TokenGranularity) {
  SimilarityConfig cfg;
  cfg.granularity = Granularity::Token;
  const std::string s = "Dale Earnhardt was the son of Ralph Earnhardt.";
  const auto m = fuzzy_locate("Ralph Earnhardt", s, 0.8, cfg);
  ASSERT_TRUE(m);
  EXPECT_EQ(s.substr(m->begin, m->end - m->begin), "Ralph Earnhardt");
}

}  // namespace
}  // namespace rerc
