#include "rerc/remote.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <httplib.h>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

using nlohmann::json;

Endpoint parse_endpoint(std::string_view url) {
  std::string_view rest = text::trim(url);
  if (rest.starts_with("https://")) throw ConfigError("remote endpoint: https is not supported: " + std::string(url));
  if (rest.starts_with("http://")) rest.remove_prefix(7);
  while (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  if (rest.empty() || rest.find('/') != std::string_view::npos) {
    throw ConfigError("remote endpoint: expected http://host[:port], got \"" + std::string(url) + "\"");
  }
  Endpoint e;
  const auto colon = rest.rfind(':');
  if (colon == std::string_view::npos) {
    e.host = std::string(rest);
    return e;
  }
  e.host = std::string(rest.substr(0, colon));
  const auto port = rest.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), e.port);
  if (e.host.empty() || ec != std::errc() || ptr != port.data() + port.size() || e.port <= 0 || e.port > 65535) {
    throw ConfigError("remote endpoint: bad port in \"" + std::string(url) + "\"");
  }
  return e;
}

WireClient::WireClient(std::string_view url, std::chrono::milliseconds timeout)
    : endpoint_(parse_endpoint(url)), timeout_(timeout) {}

json WireClient::infer(std::string_view task, const json& payload) const {
  httplib::Client cli(endpoint_.host, endpoint_.port);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  cli.set_write_timeout(timeout_);
  const json body{{"task", task}, {"payload", payload}};
  auto res = cli.Post("/v1/infer", body.dump(), "application/json");
  if (!res) {
    throw RemoteError("POST /v1/infer to " + endpoint_.host + ":" + std::to_string(endpoint_.port) +
                      " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw RemoteError("POST /v1/infer returned status " + std::to_string(res->status) + ": " + res->body);
  }
  json out;
  try {
    out = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw RemoteError(std::string("malformed response body: ") + e.what());
  }
  if (!out.is_object()) throw RemoteError("response body is not a JSON object");
  return out;
}

namespace {

template <class T>
T field(const json& body, const char* name) {
  if (!body.contains(name)) throw RemoteError(std::string("response lacks \"") + name + "\"");
  try {
    return body.at(name).get<T>();
  } catch (const json::exception& e) {
    throw RemoteError(std::string("response field \"") + name + "\": " + e.what());
  }
}

}  // namespace

json extract_request(std::string_view question) { return json{{"question", question}}; }

ExtractResponse parse_extract_response(const json& body) {
  ExtractResponse r;
  if (body.contains("type_probs") && !body.at("type_probs").is_null()) {
    const auto v = field<std::vector<double>>(body, "type_probs");
    if (v.size() != kQuestionTypeCount) throw RemoteError("type_probs must have 4 entries");
    std::array<double, kQuestionTypeCount> a{};
    std::copy(v.begin(), v.end(), a.begin());
    if (std::abs(std::accumulate(a.begin(), a.end(), 0.0) - 1.0) > 1e-6) {
      throw RemoteError("type_probs do not sum to 1");
    }
    r.type_probs = a;
  }
  if (body.contains("subjects")) r.subjects = field<std::vector<std::string>>(body, "subjects");
  if (body.contains("relation_scores") && !body.at("relation_scores").is_null()) {
    const json& rs = body.at("relation_scores");
    if (!rs.is_object()) throw RemoteError("relation_scores must be an object");
    RelationScores scores;
    if (rs.contains("vocabulary")) scores.vocabulary = field<std::vector<std::string>>(rs, "vocabulary");
    const auto rows = field<std::vector<std::vector<double>>>(rs, "per_type");
    if (rows.size() != kQuestionTypeCount) throw RemoteError("relation_scores.per_type must have 4 rows");
    std::copy(rows.begin(), rows.end(), scores.per_type.begin());
    r.relation_scores = std::move(scores);
  }
  if (body.contains("relation_spans") && !body.at("relation_spans").is_null()) {
    r.relation_spans = field<std::vector<std::string>>(body, "relation_spans");
  }
  if (!r.relation_scores && !r.relation_spans) {
    throw RemoteError("extract response has neither relation_scores nor relation_spans");
  }
  return r;
}

json extract_response_to_json(const ExtractResponse& r) {
  json out = json::object();
  if (r.type_probs) out["type_probs"] = *r.type_probs;
  out["subjects"] = r.subjects;
  if (r.relation_scores) {
    out["relation_scores"] = {{"vocabulary", r.relation_scores->vocabulary},
                              {"per_type", r.relation_scores->per_type}};
  }
  if (r.relation_spans) out["relation_spans"] = *r.relation_spans;
  return out;
}

json read_request(const SubQuestion& sq, std::span<const Paragraph> context) {
  json paragraphs = json::array();
  for (const auto& p : context) paragraphs.push_back({{"title", p.title}, {"sentences", p.sentences}});
  return json{{"subject", sq.subject}, {"relation", sq.relation}, {"paragraphs", std::move(paragraphs)}};
}

SubAnswer parse_read_response(const json& body, const SubQuestion& sq, std::span<const Paragraph> context) {
  if (!body.contains("answer") || body.at("answer").is_null()) throw NoAnswer("remote reader abstained");
  const auto answer = field<std::string>(body, "answer");
  if (text::trim(answer).empty()) throw NoAnswer("remote reader abstained");
  const auto source = field<std::vector<long long>>(body, "source");
  if (source.size() != 2 || source[0] < 0 || source[1] < 0) throw RemoteError("source must be [p, s]");
  const auto p = static_cast<std::size_t>(source[0]);
  const auto s = static_cast<std::size_t>(source[1]);
  if (p >= context.size() || s >= context[p].sentences.size()) {
    throw RemoteError("source [" + std::to_string(p) + ", " + std::to_string(s) + "] is outside the context");
  }
  SubAnswer out;
  out.text = answer;
  out.score = body.contains("score") ? field<double>(body, "score") : 0.0;
  out.source = SentenceRef{context[p].index, s};
  out.title = context[p].title;
  out.sub_question = sq;
  return out;
}

json compare_request(std::string_view question, std::string_view first, std::string_view last) {
  return json{{"question", question}, {"first", first}, {"last", last}};
}

ComparisonState parse_compare_response(const json& body) {
  const auto v = field<int>(body, "state");
  if (v < 0 || v > 3) throw RemoteError("state must be 0..3, got " + std::to_string(v));
  return comparison_state_from_int(v);
}

Decomposition RemoteExtractor::extract(std::string_view question) const {
  const ExtractResponse r = parse_extract_response(client_->infer("extract", extract_request(question)));
  std::optional<Decomposition> rules;
  try {
    rules = rules_.extract(question);
  } catch (const ExtractionFailed&) {
  }

  Decomposition d;
  d.subjects = r.subjects;
  if (d.subjects.empty() && rules) d.subjects = rules->subjects;
  d.type_probs = r.type_probs;
  if (r.type_probs) {
    d.qtype = argmax_type(*r.type_probs);
  } else if (rules) {
    d.qtype = rules->qtype;
  }

  if (mode_ == ExtractionMode::Span) {
    if (!r.relation_spans) throw RemoteError("span extraction response lacks relation_spans");
    d.relations = *r.relation_spans;
  } else {
    if (!r.relation_scores) throw RemoteError("classification response lacks relation_scores");
    if (!r.type_probs) throw RemoteError("classification response lacks type_probs");
    RelationScores scores = *r.relation_scores;
    if (scores.vocabulary.empty()) scores.vocabulary = vocabulary_;
    const std::vector<std::string> cue_order = rules ? rules->relations : std::vector<std::string>{};
    const std::size_t want = std::min(infer_top_k(d.qtype, cue_order.size()), scores.vocabulary.size());
    const auto fused = fuse_relation_scores(*r.type_probs, scores, std::max<std::size_t>(want, 1));
    for (const auto& rel : cue_order) {
      if (std::find(fused.begin(), fused.end(), rel) != fused.end()) d.relations.push_back(rel);
    }
    for (const auto& rel : fused) {
      if (std::find(d.relations.begin(), d.relations.end(), rel) == d.relations.end()) d.relations.push_back(rel);
    }
  }
  if (d.subjects.empty()) throw ExtractionFailed("remote extractor returned no subject");
  if (d.relations.empty()) throw ExtractionFailed("remote extractor returned no relation");
  return d;
}

SubAnswer RemoteReader::read(const SubQuestion& sq, std::span<const Paragraph> context,
                             const SimilarityConfig&) const {
  return parse_read_response(client_->infer("read", read_request(sq, context)), sq, context);
}

ComparisonState RemoteComparator::compare(std::string_view question, const ComparableValue& first,
                                          const ComparableValue& last) const {
  return parse_compare_response(client_->infer("compare", compare_request(question, first.raw, last.raw)));
}

}  // namespace rerc
