#pragma once

/// \file decompose.hpp
/// Question decomposition into subjects, relations and a question type, the
/// category-aware fusion of per-type relation scores, and composition of the
/// chained sub-questions.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rerc/corpus.hpp"
#include "rerc/lexicon.hpp"

namespace rerc {

inline constexpr std::string_view kAnswerPlaceholder = "[ANS]";

struct Decomposition {
  std::vector<std::string> subjects;
  std::vector<std::string> relations;  // chain order, innermost hop first
  QuestionType qtype = QuestionType::Compositional;
  std::optional<std::array<double, kQuestionTypeCount>> type_probs;
};

/// Throws InvariantViolation on empty subjects/relations or a type-probability
/// vector that does not sum to 1 within 1e-6.
void validate(const Decomposition& d);

struct RelationScores {
  std::array<std::vector<double>, kQuestionTypeCount> per_type;  // one row per question type
  std::vector<std::string> vocabulary;
};

/// fused = sum_t type_probs[t] * per_type[t]; returns the top_k labels by fused
/// score, ties in vocabulary order. Throws DimensionMismatch for ragged rows,
/// a wrong-length probability vector or top_k outside [1, K].
std::vector<std::string> fuse_relation_scores(std::span<const double> type_probs, const RelationScores& scores,
                                              std::size_t top_k);

/// Index of the most probable type (first on ties).
QuestionType argmax_type(std::span<const double> type_probs);

/// Relations to request from a classifier for a question type.
std::size_t infer_top_k(QuestionType t, std::size_t detected_cues);

class ExtractorBackend {
 public:
  virtual ~ExtractorBackend() = default;
  virtual Decomposition extract(std::string_view question) const = 0;
};

/// Pattern grammar over question templates: comparison lists ("..., A or B?",
/// "Are A and B ...?"), possessive and "R of X" chains, and a cue table mapping
/// question phrases to relation labels.
class RuleBasedExtractor final : public ExtractorBackend {
 public:
  explicit RuleBasedExtractor(const RelationLexicon& lexicon = RelationLexicon::builtin()) : lexicon_(&lexicon) {}

  Decomposition extract(std::string_view question) const override;

  /// Relations named by cues in the question, chain order; empty if none.
  std::vector<std::string> cue_relations(std::string_view question) const;

 private:
  const RelationLexicon* lexicon_;
};

/// Dispatches to the backend and validates the result.
Decomposition extract(std::string_view question, const ExtractorBackend& backend);

struct SubQuestion {
  std::string subject;  // literal entity, or kAnswerPlaceholder after hop 1
  std::string relation;
  std::size_t chain_id = 0;
  std::size_t hop = 1;

  friend bool operator==(const SubQuestion&, const SubQuestion&) = default;
};

/// One chain per subject for the comparison family, a single chain otherwise.
/// Ordered by (chain_id, hop). Throws ArityMismatch when the subject or
/// relation count does not fit the type.
std::vector<SubQuestion> compose_sub_questions(const Decomposition& d);

}  // namespace rerc
