#pragma once

/// \file values.hpp
/// Recognition of dates and plain numbers, both as whole answer strings and
/// as spans inside a sentence.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rerc {

struct CalendarDate {
  int year = 0;
  std::optional<int> month;
  std::optional<int> day;

  friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
};

struct ComparableValue {
  enum class Kind { Date, Number, Unparsed };

  Kind kind = Kind::Unparsed;
  std::optional<CalendarDate> date;
  std::optional<double> number;
  std::string raw;

  friend bool operator==(const ComparableValue&, const ComparableValue&) = default;
};

std::string_view to_string(ComparableValue::Kind k);

/// "Month D, YYYY", "D Month YYYY", "Month YYYY", "YYYY" and ISO "YYYY-MM-DD",
/// tolerant of surrounding punctuation; then plain numbers with optional
/// thousands separators; anything else is Unparsed.
ComparableValue parse_value(std::string_view raw);

/// 1..12 for an English month name or common abbreviation, case-insensitive.
std::optional<int> month_from_name(std::string_view word);

struct ValueSpan {
  std::size_t begin = 0;  // byte offsets into the scanned text
  std::size_t end = 0;
};

/// Non-overlapping date mentions in reading order.
std::vector<ValueSpan> find_date_spans(std::string_view text);
/// Numeric tokens not covered by a date mention.
std::vector<ValueSpan> find_number_spans(std::string_view text);

}  // namespace rerc
