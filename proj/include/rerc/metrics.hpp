#pragma once

/// \file metrics.hpp
/// Answer, supporting-fact, evidence and joint scores with a per-type
/// breakdown, in the 2WikiMultiHopQA evaluation convention.

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rerc/corpus.hpp"

namespace rerc {

struct Prf {
  double em = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Lowercase, punctuation and hyphens to spaces, articles dropped, whitespace
/// collapsed.
std::string normalize_answer(std::string_view s);

/// Exact match on normalized strings and token-bag precision/recall/F1. A
/// yes/no/noanswer on either side scores 0 unless both sides agree.
Prf answer_scores(std::string_view pred, std::string_view gold);

/// Precision |pred ∩ gold| / |pred| and recall |pred ∩ gold| / |gold| over
/// distinct elements. Two empty sets agree perfectly.
Prf sp_scores(std::span<const SupportingFact> pred, std::span<const SupportingFact> gold);
/// Triples are compared after normalize_answer on every slot.
Prf evidence_scores(std::span<const EvidenceTriple> pred, std::span<const EvidenceTriple> gold);

/// Products of the three axes' em, precision and recall; f1 from the joint
/// precision and recall.
Prf joint_scores(const Prf& ans, const Prf& sp, const Prf& ev);

struct AxisScores {
  Prf answer;
  Prf sp;
  Prf evidence;
  Prf joint;
};

struct Predictions {
  std::map<std::string, std::string> answer;
  std::map<std::string, std::vector<SupportingFact>> sp;
  std::map<std::string, std::vector<EvidenceTriple>> evidence;
};

/// Reads the submission shape; missing "sp"/"evidence" sections are empty.
/// Throws SchemaError on malformed entries.
Predictions parse_predictions(const nlohmann::json& doc);
Predictions load_predictions(const std::filesystem::path& path);
/// The gold labels in submission form.
Predictions gold_as_predictions(std::span<const Example> gold);

AxisScores score_question(const Predictions& pred, const Example& gold);

struct ScoreReport {
  AxisScores overall;
  std::map<QuestionType, AxisScores> per_type;
  std::size_t n = 0;
  std::map<QuestionType, std::size_t> n_per_type;
  std::size_t missing = 0;       // gold ids without a prediction (scored 0)
  std::size_t unexpected = 0;    // predicted ids not in the gold split
};

/// Unweighted means over the gold questions. Without `allow_partial` a gold id
/// missing from the answer predictions, or an answer for an unknown id, throws
/// InvariantViolation.
ScoreReport evaluate(const Predictions& pred, std::span<const Example> gold, bool allow_partial = false);

/// Percentages in a fixed-width table: one row for all questions, one per type.
std::string report_table(const ScoreReport& r);
nlohmann::ordered_json report_json(const ScoreReport& r);
/// scope,n,metric,em,f1,precision,recall
std::string report_csv(const ScoreReport& r);

}  // namespace rerc
