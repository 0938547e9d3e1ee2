#pragma once

/// \file corpus.hpp
/// Dataset records in the 2WikiMultiHopQA JSON layout, their validation, and
/// a flat sentence index over a split.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace rerc {

enum class QuestionType { Compositional = 0, Inference = 1, Comparison = 2, BridgeComparison = 3 };

inline constexpr std::size_t kQuestionTypeCount = 4;

std::string_view to_string(QuestionType t);
/// Accepts the dataset spellings ("bridge_comparison", "bridge comparison", ...).
std::optional<QuestionType> parse_question_type(std::string_view s);

bool is_comparison_family(QuestionType t);

struct Paragraph {
  std::string title;
  std::vector<std::string> sentences;
  std::size_t index = 0;  // position in the example's context
};

struct EvidenceTriple {
  std::string subject;
  std::string relation;
  std::string object;

  friend bool operator==(const EvidenceTriple&, const EvidenceTriple&) = default;
};

struct SupportingFact {
  std::string title;
  std::size_t sentence = 0;

  friend auto operator<=>(const SupportingFact&, const SupportingFact&) = default;
};

struct Example {
  std::string id;
  std::string question;
  QuestionType qtype = QuestionType::Compositional;
  std::vector<Paragraph> context;
  std::string gold_answer;
  std::vector<SupportingFact> supporting_facts;  // set semantics, file order kept
  std::vector<EvidenceTriple> gold_evidence;
};

struct LoadStats {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<std::string> problems;  // one message per skipped record
};

/// Throws InvariantViolation describing the first broken invariant.
void validate(const Example& ex);

Example example_from_json(const nlohmann::json& record);
nlohmann::ordered_json example_to_json(const Example& ex);

/// Loads a JSON array split. Strict mode aborts on the first schema or
/// invariant problem; lenient mode skips the record and counts it.
std::vector<Example> load_split(const std::filesystem::path& path, bool strict, LoadStats* stats = nullptr);
std::vector<Example> parse_split(const nlohmann::json& doc, bool strict, LoadStats* stats = nullptr);

nlohmann::ordered_json serialize_split(const std::vector<Example>& examples);

struct IndexedSentence {
  std::string example_id;
  std::size_t paragraph = 0;
  std::size_t sentence = 0;
  std::string text;
};

class SentenceIndex {
 public:
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<IndexedSentence>& entries() const noexcept { return entries_; }

  /// First paragraph carrying `title` that has a sentence at `sentence`.
  const IndexedSentence* find(std::string_view example_id, std::string_view title, std::size_t sentence) const;

 private:
  friend SentenceIndex index_sentences(const std::vector<Example>& examples);

  std::vector<IndexedSentence> entries_;
  std::map<std::tuple<std::string, std::string, std::size_t>, std::size_t, std::less<>> by_fact_;
};

SentenceIndex index_sentences(const std::vector<Example>& examples);

std::string read_file(const std::filesystem::path& path);

}  // namespace rerc
