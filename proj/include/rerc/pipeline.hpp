#pragma once

/// \file pipeline.hpp
/// End-to-end pass per question: decompose, screen per hop, read, compare,
/// then the final answer with its supporting facts and evidence path.

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rerc/comparator.hpp"
#include "rerc/corpus.hpp"
#include "rerc/decompose.hpp"
#include "rerc/entities.hpp"
#include "rerc/lexicon.hpp"
#include "rerc/qetps.hpp"
#include "rerc/reader.hpp"
#include "rerc/remote.hpp"
#include "rerc/similarity.hpp"

namespace rerc {

enum class ExtractorKind { Rule, RemoteCre, RemoteSre };
enum class ReaderKind { Lexical, Remote };
enum class ComparatorKind { Deterministic, Remote };

std::string_view to_string(ExtractorKind k);
std::string_view to_string(ReaderKind k);
std::string_view to_string(ComparatorKind k);
std::optional<ExtractorKind> parse_extractor_kind(std::string_view s);
std::optional<ReaderKind> parse_reader_kind(std::string_view s);
std::optional<ComparatorKind> parse_comparator_kind(std::string_view s);

struct PipelineConfig {
  SimilarityConfig similarity;
  std::size_t context_budget_tokens = 512;
  ExtractorKind extractor = ExtractorKind::Rule;
  ReaderKind reader = ReaderKind::Lexical;
  ComparatorKind comparator = ComparatorKind::Deterministic;
  ScreeningStrategy screening = ScreeningStrategy::Qetps;
  std::string remote_endpoint;
  std::size_t parallelism = 1;

  std::string question_cues;        // optional JSON tables replacing the built-in ones
  std::string context_cues;
  std::string polarity_table;
  std::string entity_annotations;   // optional side file of per-sentence entities
  std::string relation_vocabulary;  // JSON list of labels for classifier responses without one

  bool comparison_triple = true;  // append (first; less than; last) after a comparison

  /// ConfigError for thresholds outside [0, 1], a zero budget or parallelism,
  /// or a remote backend without an endpoint.
  void validate() const;

  /// Flat keys mirroring the fields; unknown keys are a ConfigError. Not
  /// validated, since flags and the environment may still fill in values.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig from_json(const nlohmann::json& j, PipelineConfig base);
  nlohmann::ordered_json to_json() const;
};

struct HopTrace {
  SubQuestion sub_question;  // subject resolved
  std::vector<std::size_t> screened;  // original paragraph positions, best first
  std::size_t tokens_used = 0;
  std::optional<SubAnswer> answer;
  std::string error;
};

struct ComparisonTrace {
  ComparisonState state = ComparisonState::NotEqual;
  std::string first;
  std::string last;
};

struct PredictionRecord {
  std::string id;
  std::string answer;
  std::vector<SupportingFact> supporting_facts;  // distinct, first-use order
  std::vector<EvidenceTriple> evidence;
  std::vector<HopTrace> hops;
  std::optional<ComparisonTrace> comparison;

  std::optional<Decomposition> decomposition;
  std::vector<std::vector<std::string>> tree_levels;
  std::vector<std::string> failures;
  bool low_confidence = false;
};

class Pipeline {
 public:
  /// Loads the configured tables and connects the configured backends.
  explicit Pipeline(PipelineConfig config);
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  const PipelineConfig& config() const noexcept { return config_; }

  /// Never throws on data; failures degrade and are listed in the record.
  PredictionRecord run(const Example& ex) const;

  /// One record per example in input order, `parallelism` questions at a time.
  std::vector<PredictionRecord> run_split(std::span<const Example> examples, std::size_t parallelism) const;

 private:
  PipelineConfig config_;
  RelationLexicon lexicon_;
  PolarityTable polarity_;
  std::optional<EntityAnnotations> annotations_;
  std::unique_ptr<WireClient> client_;
  std::unique_ptr<ExtractorBackend> extractor_;
  std::unique_ptr<ReaderBackend> reader_;
  std::unique_ptr<ComparatorBackend> comparator_;
};

PredictionRecord run_question(const Example& ex, const PipelineConfig& config);

/// {"answer": {id: text}, "sp": {id: [[title, sent]]}, "evidence": {id: [[s, r, o]]}}
nlohmann::ordered_json submission_json(std::span<const PredictionRecord> records);

/// One JSON object per record for the trace file.
nlohmann::ordered_json trace_json(const PredictionRecord& record);

/// First entity of the longest context sentence, else its first token.
std::string fallback_answer(const Example& ex);

}  // namespace rerc
