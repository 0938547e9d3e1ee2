#include <gtest/gtest.h>

#include <string>

#include "rerc/values.hpp"

namespace rerc {
namespace {

using Kind = ComparableValue::Kind;

CalendarDate D(int y, std::optional<int> m = std::nullopt, std::optional<int> d = std::nullopt) {
  return CalendarDate{y, m, d};
}

TEST(ParseValue, MonthDayYear) {
  const auto v = parse_value("January 28, 1956");
  ASSERT_EQ(v.kind, Kind::Date);
  EXPECT_EQ(*v.date, D(1956, 1, 28));
  EXPECT_EQ(v.raw, "January 28, 1956");
}

TEST(ParseValue, DayMonthYearWithStrayParenthesis) {
  const auto v = parse_value("(6 February 1932");
  ASSERT_EQ(v.kind, Kind::Date);
  EXPECT_EQ(*v.date, D(1932, 2, 6));
}

TEST(ParseValue, TrailingPunctuation) {
  EXPECT_EQ(*parse_value("8 January 1969))").date, D(1969, 1, 8));
  EXPECT_EQ(*parse_value("23 May 2003.").date, D(2003, 5, 23));
}

TEST(ParseValue, BareYear) {
  const auto v = parse_value("1985");
  ASSERT_EQ(v.kind, Kind::Date);
  EXPECT_EQ(*v.date, D(1985));
  EXPECT_FALSE(v.number);
}

TEST(ParseValue, MonthYearAndIso) {
  EXPECT_EQ(*parse_value("July 1971").date, D(1971, 7));
  EXPECT_EQ(*parse_value("1971-07-18").date, D(1971, 7, 18));
  EXPECT_EQ(*parse_value("Sept. 3, 1990").date, D(1990, 9, 3));
  EXPECT_EQ(*parse_value("3rd March 1990").date, D(1990, 3, 3));
}

TEST(ParseValue, Numbers) {
  const auto v = parse_value("1,234,567");
  ASSERT_EQ(v.kind, Kind::Number);
  EXPECT_DOUBLE_EQ(*v.number, 1234567.0);
  EXPECT_FALSE(v.date);
  EXPECT_DOUBLE_EQ(*parse_value("3.5").number, 3.5);
  EXPECT_DOUBLE_EQ(*parse_value("-12").number, -12.0);
}

TEST(ParseValue, EverythingElseIsUnparsed) {
  for (const char* s : {"", "Chano Urueta", "French-born", "February 30 or so", "1,23,4"}) {
    const auto v = parse_value(s);
    EXPECT_EQ(v.kind, Kind::Unparsed) << s;
    EXPECT_FALSE(v.date);
    EXPECT_FALSE(v.number);
    EXPECT_EQ(v.raw, s);
  }
}

TEST(ParseValue, IdempotentOnItsRawEcho) {
  for (const char* s : {"January 28, 1956", "(6 February 1932", "1985", "1,000", "Paris", "May 2003"}) {
    const auto once = parse_value(s);
    const auto twice = parse_value(once.raw);
    EXPECT_EQ(once, twice) << s;
  }
}

TEST(MonthNames, FullAndAbbreviated) {
  EXPECT_EQ(month_from_name("February"), 2);
  EXPECT_EQ(month_from_name("feb"), 2);
  EXPECT_EQ(month_from_name("Dec."), 12);
  EXPECT_FALSE(month_from_name("Febuary"));
}

TEST(Spans, DatesAndNumbersInASentence) {
  const std::string s = "Chano Urueta was a Mexican film director and actor, born on February 24, 1904.";
  const auto dates = find_date_spans(s);
  ASSERT_EQ(dates.size(), 1u);
  EXPECT_EQ(s.substr(dates[0].begin, dates[0].end - dates[0].begin), "February 24, 1904");
  EXPECT_TRUE(find_number_spans(s).empty());

  const std::string t = "The town had a population of 12,000 in 1990.";
  const auto nums = find_number_spans(t);
  ASSERT_EQ(nums.size(), 1u);
  EXPECT_EQ(t.substr(nums[0].begin, nums[0].end - nums[0].begin), "12,000");
  const auto years = find_date_spans(t);
  ASSERT_EQ(years.size(), 1u);
  EXPECT_EQ(t.substr(years[0].begin, years[0].end - years[0].begin), "1990");
}

TEST(Spans, ParenthesizedBirthDate) {
  const std::string s = "Osita Chidoka (born 18 July 1971) is a Nigerian politician.";
  const auto dates = find_date_spans(s);
  ASSERT_EQ(dates.size(), 1u);
  EXPECT_EQ(s.substr(dates[0].begin, dates[0].end - dates[0].begin), "18 July 1971");
}

}  // namespace
}  // namespace rerc
