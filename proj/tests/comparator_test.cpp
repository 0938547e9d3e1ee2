#include <gtest/gtest.h>

#include <random>

#include "rerc/comparator.hpp"
#include "rerc/errors.hpp"

namespace rerc {
namespace {

using S = ComparisonState;

TEST(Compare, WorkedCases) {
  EXPECT_EQ(compare("Which film came out earlier, Aram + Aram = Kinnaram or Thayagam?", parse_value("1985"),
                    parse_value("1996")),
            S::FirstMeets);
  EXPECT_EQ(compare("Who is younger, David Faurschou or Osita Chidoka?", parse_value("January 28, 1956"),
                    parse_value("18 July 1971")),
            S::LastMeets);
  EXPECT_EQ(compare("Which film has the director who is older, The Woman Next Door or La Estatua De Carne?",
                    parse_value("(6 February 1932"), parse_value("February 24, 1904")),
            S::LastMeets);
  EXPECT_EQ(compare("Which film has the director died later, Fugitives For A Night or Chinese In Paris?",
                    parse_value("8 January 1969)"), parse_value("23 May 2003)")),
            S::LastMeets);
}

TEST(Compare, IdenticalValuesAreEqual) {
  EXPECT_EQ(compare("Which came out earlier, A or B?", parse_value("1985"), parse_value("1985")), S::Equal);
}

TEST(Compare, EqualityQuestions) {
  const auto a = parse_value("1985");
  const auto b = parse_value("1996");
  EXPECT_EQ(compare("Were A and B released in the same year?", a, a), S::Equal);
  EXPECT_EQ(compare("Were A and B released in the same year?", a, b), S::NotEqual);
  EXPECT_EQ(compare("Do A and B have equal populations?", parse_value("12,000"), parse_value("12000")), S::Equal);
}

TEST(Compare, PartialPrecision) {
  EXPECT_EQ(compare("Which came out earlier, A or B?", parse_value("1985"), parse_value("March 3, 1986")),
            S::FirstMeets);
  EXPECT_EQ(compare("Which came out earlier, A or B?", parse_value("May 1985"), parse_value("March 1985")),
            S::LastMeets);
  EXPECT_THROW(compare("Which came out earlier, A or B?", parse_value("1985"), parse_value("March 3, 1985")),
               AmbiguousPrecision);
  EXPECT_THROW(compare("Which came out earlier, A or B?", parse_value("March 1985"), parse_value("March 3, 1985")),
               AmbiguousPrecision);
}

TEST(Compare, Errors) {
  EXPECT_THROW(compare("Which came out earlier, A or B?", parse_value("1985"), parse_value("1,000,000")),
               IncomparableKinds);
  EXPECT_THROW(compare("Which came out earlier, A or B?", parse_value("Paris"), parse_value("1985")), IncomparableKinds);
  EXPECT_THROW(compare("Which one, A or B?", parse_value("1985"), parse_value("1996")), UnknownPolarity);
}

TEST(Compare, CueInOptionNamesIsIgnored) {
  // "Later" sits in an option name; the question's own cue is "earlier"
  EXPECT_EQ(compare("Which film came out earlier, Later Days or Thayagam?", parse_value("1990"), parse_value("1980")),
            S::LastMeets);
}

TEST(Compare, NumbersUnderLargerWins) {
  EXPECT_EQ(compare("Which city has a larger population, A or B?", parse_value("12,000"), parse_value("9,500")),
            S::FirstMeets);
}

TEST(Polarity, TableLookup) {
  const auto& t = PolarityTable::builtin();
  EXPECT_EQ(t.find("who died more recently?")->second, Polarity::LargerWins);
  EXPECT_EQ(t.find("who died more recently?")->first, "more recently");
  EXPECT_EQ(t.find("Which came out first?")->second, Polarity::SmallerWins);
  EXPECT_FALSE(t.find("which one?"));
  // word boundaries: "lastly" is not "last"
  EXPECT_FALSE(t.find("which was lastly"));
}

TEST(Polarity, CustomTable) {
  const auto t = PolarityTable::from_json_text(R"({"senior": "smaller_wins", "junior": "larger_wins"})");
  EXPECT_EQ(compare("Who is senior, A or B?", parse_value("1950"), parse_value("1960"), t), S::FirstMeets);
  EXPECT_THROW(compare("Who is older, A or B?", parse_value("1950"), parse_value("1960"), t), UnknownPolarity);
  EXPECT_THROW(PolarityTable::from_json_text(R"({"x": "bigger"})"), ConfigError);
  EXPECT_THROW(PolarityTable::from_json_text("[]"), ConfigError);
}

TEST(Resolve, FinalAnswer) {
  const std::pair<std::string, std::string> films{"Aram + Aram = Kinnaram", "Thayagam"};
  EXPECT_EQ(resolve_final(S::FirstMeets, films, "Which film came out earlier?"), "Aram + Aram = Kinnaram");
  EXPECT_EQ(resolve_final(S::LastMeets, {"Fugitives for a Night", "Chinese in Paris"}, "died later"), "Chinese in Paris");
  EXPECT_EQ(resolve_final(S::Equal, films, "Are both films from the same country?"), "yes");
  EXPECT_EQ(resolve_final(S::NotEqual, films, "Are both films from the same country?"), "no");
  EXPECT_EQ(resolve_final(S::Equal, films, "Which film came out earlier, A or B?"), "Aram + Aram = Kinnaram");
}

TEST(Resolve, ComparisonRelation) {
  EXPECT_EQ(comparison_relation(parse_value("8 January 1969"), parse_value("23 May 2003")), "less than");
  EXPECT_EQ(comparison_relation(parse_value("1996"), parse_value("1985")), "greater than");
  EXPECT_EQ(comparison_relation(parse_value("1996"), parse_value("1996")), "equal to");
  EXPECT_EQ(comparison_relation(parse_value("1996"), parse_value("May 1996")), "not equal to");
}

TEST(States, IntegerCodes) {
  EXPECT_EQ(comparison_state_from_int(0), S::NotEqual);
  EXPECT_EQ(comparison_state_from_int(3), S::LastMeets);
  EXPECT_THROW(comparison_state_from_int(4), std::out_of_range);
  EXPECT_EQ(to_string(S::FirstMeets), "first_meets");
}

TEST(Compare, AntisymmetryAndPolarityInversion) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> year(1900, 1910), month(1, 12), day(1, 28);
  for (int i = 0; i < 300; ++i) {
    auto make = [&] {
      return parse_value(std::to_string(day(rng)) + " " +
                         std::string(std::array<const char*, 12>{"January", "February", "March", "April", "May", "June",
                                                                 "July", "August", "September", "October",
                                                                 "November", "December"}[month(rng) - 1]) +
                         " " + std::to_string(year(rng)));
    };
    const auto a = make();
    const auto b = make();
    const auto ab = compare("Who was born earlier, A or B?", a, b);
    const auto ba = compare("Who was born earlier, A or B?", b, a);
    const auto inv = compare("Who was born later, A or B?", a, b);
    if (ab == S::Equal) {
      EXPECT_EQ(ba, S::Equal);
      EXPECT_EQ(inv, S::Equal);
    } else {
      EXPECT_EQ(ba, ab == S::FirstMeets ? S::LastMeets : S::FirstMeets);
      EXPECT_EQ(inv, ba);
    }
  }
}

}  // namespace
}  // namespace rerc
