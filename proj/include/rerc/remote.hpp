#pragma once

/// \file remote.hpp
/// Client side of the inference wire protocol: HTTP POST /v1/infer with a JSON
/// body {"task": "extract" | "read" | "compare", "payload": {...}}.
///
///   extract  {question}                       -> {type_probs, subjects, relation_scores: {vocabulary, per_type}}
///                                                or {relation_spans, ...} in span mode
///   read     {subject, relation, paragraphs}  -> {answer, score, source: [p, s]}
///   compare  {question, first, last}          -> {state}
///
/// The request/response converters are free functions so they can be checked
/// without a server.

#include <array>
#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rerc/comparator.hpp"
#include "rerc/decompose.hpp"
#include "rerc/reader.hpp"

namespace rerc {

struct Endpoint {
  std::string host;
  int port = 80;
};

/// Accepts "http://host[:port][/]" or "host:port". Throws ConfigError.
Endpoint parse_endpoint(std::string_view url);

class WireClient {
 public:
  explicit WireClient(std::string_view url, std::chrono::milliseconds timeout = std::chrono::seconds(30));

  /// Throws RemoteError on transport failure, a non-200 status or a body that
  /// is not a JSON object.
  nlohmann::json infer(std::string_view task, const nlohmann::json& payload) const;

  const Endpoint& endpoint() const noexcept { return endpoint_; }

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
};

struct ExtractResponse {
  std::optional<std::array<double, kQuestionTypeCount>> type_probs;
  std::vector<std::string> subjects;
  std::optional<RelationScores> relation_scores;
  std::optional<std::vector<std::string>> relation_spans;
};

nlohmann::json extract_request(std::string_view question);
ExtractResponse parse_extract_response(const nlohmann::json& body);
nlohmann::json extract_response_to_json(const ExtractResponse& r);

nlohmann::json read_request(const SubQuestion& sq, std::span<const Paragraph> context);
/// `source` indexes the paragraphs as sent; it is mapped back to the original
/// context position. A null or empty answer is an abstention (NoAnswer).
SubAnswer parse_read_response(const nlohmann::json& body, const SubQuestion& sq, std::span<const Paragraph> context);

nlohmann::json compare_request(std::string_view question, std::string_view first, std::string_view last);
ComparisonState parse_compare_response(const nlohmann::json& body);

enum class ExtractionMode { Classify, Span };

class RemoteExtractor final : public ExtractorBackend {
 public:
  /// `vocabulary` is used when a response omits relation_scores.vocabulary.
  RemoteExtractor(const WireClient& client, ExtractionMode mode,
                  const RelationLexicon& lexicon = RelationLexicon::builtin(),
                  std::vector<std::string> vocabulary = {})
      : client_(&client), mode_(mode), rules_(lexicon), vocabulary_(std::move(vocabulary)) {}

  /// Classify mode fuses the per-type scores and keeps infer_top_k labels,
  /// ordered by the question's cue order where the cues agree with the model.
  Decomposition extract(std::string_view question) const override;

 private:
  const WireClient* client_;
  ExtractionMode mode_;
  RuleBasedExtractor rules_;
  std::vector<std::string> vocabulary_;
};

class RemoteReader final : public ReaderBackend {
 public:
  explicit RemoteReader(const WireClient& client) : client_(&client) {}
  SubAnswer read(const SubQuestion& sq, std::span<const Paragraph> context,
                 const SimilarityConfig& config) const override;

 private:
  const WireClient* client_;
};

class RemoteComparator final : public ComparatorBackend {
 public:
  explicit RemoteComparator(const WireClient& client) : client_(&client) {}
  ComparisonState compare(std::string_view question, const ComparableValue& first,
                          const ComparableValue& last) const override;

 private:
  const WireClient* client_;
};

}  // namespace rerc
