#pragma once

/// \file comparator.hpp
/// Four-state comparison of two chain-final answers and its mapping to a
/// final answer string.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rerc/values.hpp"

namespace rerc {

enum class ComparisonState { NotEqual = 0, Equal = 1, FirstMeets = 2, LastMeets = 3 };

std::string_view to_string(ComparisonState s);
/// Throws std::out_of_range outside 0..3.
ComparisonState comparison_state_from_int(int v);

enum class Polarity { SmallerWins, LargerWins };

/// Superlative cue phrases and which end of the scale wins.
///
///   { "earlier": "smaller_wins", "later": "larger_wins", ... }
class PolarityTable {
 public:
  static const PolarityTable& builtin();
  static PolarityTable from_json_text(std::string_view json_text);
  static PolarityTable load(const std::filesystem::path& path);

  /// Leftmost cue on word boundaries in the normalized question; longer cues
  /// win at the same position.
  std::optional<std::pair<std::string, Polarity>> find(std::string_view question) const;

  const std::vector<std::pair<std::string, Polarity>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, Polarity>> entries_;  // longest first
};

/// "same", "equal" or "both" before the first comma, or a yes/no opening
/// (Are/Is/Do/...).
bool is_equality_question(std::string_view question);

/// The superlative cue is looked up before the first comma when there is one,
/// so the option names cannot supply it.
ComparisonState compare(std::string_view question, const ComparableValue& first, const ComparableValue& last,
                        const PolarityTable& table = PolarityTable::builtin());

/// FirstMeets/LastMeets pick the subject; Equal/NotEqual become "yes"/"no"
/// for equality phrasing and otherwise fall back to the first subject.
std::string resolve_final(ComparisonState state, const std::pair<std::string, std::string>& subjects,
                          std::string_view question);

/// "less than", "greater than", "equal to" or "not equal to" for the synthetic
/// comparison evidence triple.
std::string comparison_relation(const ComparableValue& first, const ComparableValue& last);

class ComparatorBackend {
 public:
  virtual ~ComparatorBackend() = default;
  virtual ComparisonState compare(std::string_view question, const ComparableValue& first,
                                  const ComparableValue& last) const = 0;
};

class DeterministicComparator final : public ComparatorBackend {
 public:
  explicit DeterministicComparator(const PolarityTable& table = PolarityTable::builtin()) : table_(&table) {}
  ComparisonState compare(std::string_view question, const ComparableValue& first,
                          const ComparableValue& last) const override {
    return rerc::compare(question, first, last, *table_);
  }

 private:
  const PolarityTable* table_;
};

}  // namespace rerc
