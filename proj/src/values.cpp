#include "rerc/values.hpp"

#include <array>
#include <regex>

#include "rerc/text.hpp"

namespace rerc {

namespace {

struct MonthName {
  std::string_view name;
  int month;
};

constexpr std::array<MonthName, 24> kMonths{{
    {"january", 1},  {"february", 2}, {"march", 3},     {"april", 4},    {"may", 5},       {"june", 6},
    {"july", 7},     {"august", 8},   {"september", 9}, {"october", 10}, {"november", 11}, {"december", 12},
    {"jan", 1},      {"feb", 2},      {"mar", 3},       {"apr", 4},      {"jun", 6},       {"jul", 7},
    {"aug", 8},      {"sep", 9},      {"sept", 9},      {"oct", 10},     {"nov", 11},      {"dec", 12},
}};

std::optional<int> parse_int(std::string_view s) {
  if (!text::is_all_digits(s) || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::optional<int> parse_day(std::string_view s) {
  // "1st", "2nd", "3rd", "24th"
  if (s.size() > 2) {
    const std::string tail = text::to_lower_ascii(s.substr(s.size() - 2));
    if (tail == "st" || tail == "nd" || tail == "rd" || tail == "th") s.remove_suffix(2);
  }
  if (s.empty() || s.size() > 2) return std::nullopt;
  auto d = parse_int(s);
  if (!d || *d < 1 || *d > 31) return std::nullopt;
  return d;
}

std::optional<int> parse_year(std::string_view s) {
  if (s.size() < 3 || s.size() > 4) return std::nullopt;
  auto y = parse_int(s);
  if (!y || *y < 100) return std::nullopt;
  return y;
}

struct DateHit {
  std::size_t first_token = 0;
  std::size_t token_count = 0;
  CalendarDate date;
};

// The longest date pattern starting at token i.
std::optional<DateHit> date_at(std::string_view text, const std::vector<text::Token>& toks, std::size_t i) {
  auto word = [&](std::size_t k) { return toks[k].view(text); };
  auto gap_has_only = [&](std::size_t k, std::string_view allowed) {
    // characters strictly between token k and k + 1
    const auto gap = text.substr(toks[k].end, toks[k + 1].begin - toks[k].end);
    for (char c : gap) {
      if (c == ' ' || c == '\t') continue;
      if (allowed.find(c) == std::string_view::npos) return false;
    }
    return true;
  };
  const std::size_t n = toks.size();

  if (auto month = month_from_name(word(i))) {
    // Month D, YYYY
    if (i + 2 < n && gap_has_only(i, ".") && gap_has_only(i + 1, ",")) {
      auto d = parse_day(word(i + 1));
      auto y = parse_year(word(i + 2));
      if (d && y) return DateHit{i, 3, {*y, *month, *d}};
    }
    // Month YYYY
    if (i + 1 < n && gap_has_only(i, ".,")) {
      if (auto y = parse_year(word(i + 1))) return DateHit{i, 2, {*y, *month, std::nullopt}};
    }
    return std::nullopt;
  }
  // D Month YYYY
  if (auto d = parse_day(word(i)); d && i + 2 < n && gap_has_only(i, "")) {
    if (auto month = month_from_name(word(i + 1)); month && gap_has_only(i + 1, ".,")) {
      if (auto y = parse_year(word(i + 2))) return DateHit{i, 3, {*y, *month, *d}};
    }
  }
  // ISO YYYY-MM-DD (one token, hyphens are interior)
  {
    static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2}))");
    std::match_results<std::string_view::const_iterator> m;
    const auto w = word(i);
    if (std::regex_match(w.begin(), w.end(), m, iso)) {
      const int y = std::stoi(m[1].str()), mo = std::stoi(m[2].str()), dd = std::stoi(m[3].str());
      if (mo >= 1 && mo <= 12 && dd >= 1 && dd <= 31) return DateHit{i, 1, {y, mo, dd}};
    }
  }
  // Bare year: four digits only, so small counts stay numbers.
  if (word(i).size() == 4) {
    if (auto y = parse_year(word(i))) return DateHit{i, 1, {*y, std::nullopt, std::nullopt}};
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ComparableValue::Kind k) {
  switch (k) {
    case ComparableValue::Kind::Date: return "date";
    case ComparableValue::Kind::Number: return "number";
    case ComparableValue::Kind::Unparsed: return "unparsed";
  }
  return "unparsed";
}

std::optional<int> month_from_name(std::string_view word) {
  if (!word.empty() && word.back() == '.') word.remove_suffix(1);
  const std::string w = text::to_lower_ascii(word);
  for (const auto& m : kMonths) {
    if (m.name == w) return m.month;
  }
  return std::nullopt;
}

ComparableValue parse_value(std::string_view raw) {
  ComparableValue v;
  v.raw = std::string(raw);

  const auto toks = text::tokenize(raw);
  if (!toks.empty()) {
    if (auto hit = date_at(raw, toks, 0); hit && hit->token_count == toks.size()) {
      v.kind = ComparableValue::Kind::Date;
      v.date = hit->date;
      return v;
    }
  }

  // Strip surrounding punctuation except a sign or decimal point that belongs to the number.
  std::string_view core = text::trim(raw);
  auto strippable = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::ispunct(u) || std::isspace(u);
  };
  while (!core.empty() && strippable(core.front()) && core.front() != '-' && core.front() != '+' &&
         core.front() != '.') {
    core.remove_prefix(1);
  }
  while (!core.empty() && strippable(core.back())) core.remove_suffix(1);
  static const std::regex number(R"([+-]?(\d{1,3}(,\d{3})+|\d+)(\.\d+)?|[+-]?\.\d+)");
  const std::string s(core);
  if (!s.empty() && std::regex_match(s, number)) {
    std::string digits;
    for (char c : s) {
      if (c != ',') digits.push_back(c);
    }
    v.kind = ComparableValue::Kind::Number;
    v.number = std::stod(digits);
  }
  return v;
}

std::vector<ValueSpan> find_date_spans(std::string_view text) {
  std::vector<ValueSpan> out;
  const auto toks = text::tokenize(text);
  for (std::size_t i = 0; i < toks.size();) {
    if (auto hit = date_at(text, toks, i)) {
      out.push_back({toks[i].begin, toks[i + hit->token_count - 1].end});
      i += hit->token_count;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<ValueSpan> find_number_spans(std::string_view text) {
  const auto dates = find_date_spans(text);
  std::vector<ValueSpan> out;
  for (const auto& tok : text::tokenize(text)) {
    bool in_date = false;
    for (const auto& d : dates) {
      if (tok.begin >= d.begin && tok.end <= d.end) in_date = true;
    }
    if (in_date) continue;
    if (parse_value(tok.view(text)).kind == ComparableValue::Kind::Number) out.push_back({tok.begin, tok.end});
  }
  return out;
}

}  // namespace rerc
