#include "rerc/comparator.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "rerc/corpus.hpp"
#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

std::string_view to_string(ComparisonState s) {
  switch (s) {
    case ComparisonState::NotEqual: return "not_equal";
    case ComparisonState::Equal: return "equal";
    case ComparisonState::FirstMeets: return "first_meets";
    case ComparisonState::LastMeets: return "last_meets";
  }
  return "not_equal";
}

ComparisonState comparison_state_from_int(int v) {
  if (v < 0 || v > 3) throw std::out_of_range("comparison state must be 0..3, got " + std::to_string(v));
  return static_cast<ComparisonState>(v);
}

namespace {

const char* const kBuiltinPolarity = R"json({
  "earlier": "smaller_wins",
  "earliest": "smaller_wins",
  "first": "smaller_wins",
  "older": "smaller_wins",
  "oldest": "smaller_wins",
  "elder": "smaller_wins",
  "eldest": "smaller_wins",
  "before": "smaller_wins",
  "sooner": "smaller_wins",
  "longer ago": "smaller_wins",
  "less": "smaller_wins",
  "fewer": "smaller_wins",
  "smaller": "smaller_wins",
  "later": "larger_wins",
  "latest": "larger_wins",
  "last": "larger_wins",
  "after": "larger_wins",
  "younger": "larger_wins",
  "youngest": "larger_wins",
  "newer": "larger_wins",
  "more recent": "larger_wins",
  "more recently": "larger_wins",
  "most recent": "larger_wins",
  "more": "larger_wins",
  "larger": "larger_wins",
  "bigger": "larger_wins",
  "higher": "larger_wins",
  "greater": "larger_wins"
})json";

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::size_t find_word(std::string_view hay, std::string_view word, std::size_t from = 0) {
  std::size_t pos = hay.find(word, from);
  while (pos != std::string_view::npos) {
    const std::size_t end = pos + word.size();
    const bool left = pos == 0 || !is_word_byte(static_cast<unsigned char>(hay[pos - 1]));
    const bool right = end >= hay.size() || !is_word_byte(static_cast<unsigned char>(hay[end]));
    if (left && right) return pos;
    pos = hay.find(word, pos + 1);
  }
  return std::string_view::npos;
}

// -1, 0, 1; throws for mismatched kinds and precision ties.
int order(const ComparableValue& a, const ComparableValue& b) {
  using Kind = ComparableValue::Kind;
  if (a.kind == Kind::Unparsed || b.kind == Kind::Unparsed || a.kind != b.kind) {
    throw IncomparableKinds(std::string("cannot compare ") + std::string(to_string(a.kind)) + " with " +
                            std::string(to_string(b.kind)));
  }
  if (a.kind == Kind::Number) {
    const double x = *a.number, y = *b.number;
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const CalendarDate& x = *a.date;
  const CalendarDate& y = *b.date;
  if (x.year != y.year) return x.year < y.year ? -1 : 1;
  if (x.month.has_value() != y.month.has_value()) {
    throw AmbiguousPrecision("\"" + a.raw + "\" and \"" + b.raw + "\" agree on the year only");
  }
  if (!x.month) return 0;
  if (*x.month != *y.month) return *x.month < *y.month ? -1 : 1;
  if (x.day.has_value() != y.day.has_value()) {
    throw AmbiguousPrecision("\"" + a.raw + "\" and \"" + b.raw + "\" agree on year and month only");
  }
  if (!x.day) return 0;
  if (*x.day != *y.day) return *x.day < *y.day ? -1 : 1;
  return 0;
}

std::string_view question_prefix(std::string_view q) {
  const auto comma = q.find(',');
  return comma == std::string_view::npos ? q : q.substr(0, comma);
}

}  // namespace

const PolarityTable& PolarityTable::builtin() {
  static const PolarityTable table = from_json_text(kBuiltinPolarity);
  return table;
}

PolarityTable PolarityTable::from_json_text(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("polarity table: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("polarity table: expected a JSON object");
  PolarityTable t;
  for (const auto& [cue, value] : doc.items()) {
    if (!value.is_string()) throw ConfigError("polarity table: value for \"" + cue + "\" must be a string");
    const auto v = value.get<std::string>();
    Polarity p;
    if (v == "smaller_wins") {
      p = Polarity::SmallerWins;
    } else if (v == "larger_wins") {
      p = Polarity::LargerWins;
    } else {
      throw ConfigError("polarity table: unknown polarity \"" + v + "\" for \"" + cue + "\"");
    }
    const auto key = text::normalize(cue);
    if (key.empty()) throw ConfigError("polarity table: empty cue");
    t.entries_.emplace_back(key, p);
  }
  std::stable_sort(t.entries_.begin(), t.entries_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  return t;
}

PolarityTable PolarityTable::load(const std::filesystem::path& path) { return from_json_text(read_file(path)); }

std::optional<std::pair<std::string, Polarity>> PolarityTable::find(std::string_view question) const {
  const std::string q = text::normalize(question);
  std::optional<std::pair<std::string, Polarity>> best;
  std::size_t best_pos = std::string::npos;
  for (const auto& e : entries_) {
    const auto pos = find_word(q, e.first);
    if (pos == std::string_view::npos) continue;
    // entries are longest first, so an equal position keeps the longer cue
    if (!best || pos < best_pos) {
      best = e;
      best_pos = pos;
    }
  }
  return best;
}

bool is_equality_question(std::string_view question) {
  const std::string q = text::normalize(question_prefix(question));
  for (const char* cue : {"same", "equal", "both"}) {
    if (find_word(q, cue) != std::string_view::npos) return true;
  }
  static const std::vector<std::string_view> kOpenings{"are", "is", "were", "was", "do", "does", "did", "have", "has"};
  const auto sp = q.find(' ');
  const std::string_view first = std::string_view(q).substr(0, sp);
  return std::find(kOpenings.begin(), kOpenings.end(), first) != kOpenings.end();
}

ComparisonState compare(std::string_view question, const ComparableValue& first, const ComparableValue& last,
                        const PolarityTable& table) {
  const int o = order(first, last);
  if (is_equality_question(question)) return o == 0 ? ComparisonState::Equal : ComparisonState::NotEqual;
  const auto cue = table.find(question_prefix(question));
  if (!cue) throw UnknownPolarity("no comparison cue in \"" + std::string(question) + "\"");
  if (o == 0) return ComparisonState::Equal;
  const bool first_wins = cue->second == Polarity::SmallerWins ? o < 0 : o > 0;
  return first_wins ? ComparisonState::FirstMeets : ComparisonState::LastMeets;
}

std::string resolve_final(ComparisonState state, const std::pair<std::string, std::string>& subjects,
                          std::string_view question) {
  switch (state) {
    case ComparisonState::FirstMeets: return subjects.first;
    case ComparisonState::LastMeets: return subjects.second;
    case ComparisonState::Equal:
    case ComparisonState::NotEqual:
      if (is_equality_question(question)) return state == ComparisonState::Equal ? "yes" : "no";
      return subjects.first;
  }
  return subjects.first;
}

std::string comparison_relation(const ComparableValue& first, const ComparableValue& last) {
  int o = 0;
  try {
    o = order(first, last);
  } catch (const AmbiguousPrecision&) {
    return "not equal to";
  }
  return o < 0 ? "less than" : (o > 0 ? "greater than" : "equal to");
}

}  // namespace rerc
