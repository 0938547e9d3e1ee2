#include <gtest/gtest.h>

#include "rerc/text.hpp"

namespace rerc::text {
namespace {

TEST(Normalize, FoldsCaseAndCollapsesWhitespace) {
  EXPECT_EQ(normalize("  Kévin   LEDANOIS \t"), "kévin ledanois");
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize("   "), "");
}

TEST(Normalize, ComposesCombiningMarks) {
  // "e" + U+0301 and the precomposed U+00E9 must agree
  EXPECT_EQ(normalize("Ke\xCC\x81vin"), normalize("K\xC3\xA9vin"));
}

TEST(Normalize, FoldsBeyondAscii) {
  EXPECT_EQ(normalize("STRASSE"), normalize("strasse"));
  EXPECT_EQ(normalize("ÉCOLE"), "école");
}

TEST(Tokenize, StripsEdgePunctuationAndDropsPunctuationTokens) {
  const std::string s = "Aram + Aram = Kinnaram, (born 1985).";
  std::vector<std::string> got;
  for (const auto& t : tokenize(s)) got.emplace_back(t.view(s));
  EXPECT_EQ(got, (std::vector<std::string>{"Aram", "Aram", "Kinnaram", "born", "1985"}));
}

TEST(Tokenize, KeepsInnerHyphens) {
  const std::string s = "born in Montreuil-sous-Bois.";
  const auto toks = tokenize(s);
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[2].view(s), "Montreuil-sous-Bois");
}

TEST(Tokenize, OffsetsAreBytes) {
  const std::string s = "François Truffaut";
  const auto toks = tokenize(s);
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].end, std::string("François").size());
  EXPECT_EQ(toks[1].view(s), "Truffaut");
}

TEST(WhitespaceTokens, CountAndPrefix) {
  EXPECT_EQ(count_whitespace_tokens("a  b\tc\n"), 3u);
  EXPECT_EQ(count_whitespace_tokens(""), 0u);
  const std::string s = "one two three four";
  EXPECT_EQ(s.substr(0, prefix_of_whitespace_tokens(s, 2)), "one two");
}

TEST(Predicates, Uppercase) {
  EXPECT_TRUE(starts_with_uppercase("Élodie"));
  EXPECT_FALSE(starts_with_uppercase("élodie"));
  EXPECT_FALSE(starts_with_uppercase("1985"));
  EXPECT_TRUE(is_all_digits("1985"));
  EXPECT_FALSE(is_all_digits("19a5"));
  EXPECT_FALSE(is_all_digits(""));
}

TEST(Utf8, RoundTrip) {
  const std::string s = "Chano Urueta · 1904 ✓";
  EXPECT_EQ(to_utf8(to_u32(s)), s);
}

}  // namespace
}  // namespace rerc::text
