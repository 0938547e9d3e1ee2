#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

#include "rerc/errors.hpp"
#include "rerc/pipeline.hpp"
#include "rerc/remote.hpp"

namespace rerc {
namespace {

using nlohmann::json;

// In-process stand-in for the model service. The handler maps the request
// body to (status, response body).
class FakeService {
 public:
  using Handler = std::function<std::pair<int, std::string>(const json&)>;

  explicit FakeService(Handler h) : handler_(std::move(h)) {
    server_.Post("/v1/infer", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (...) {
        res.status = 400;
        return;
      }
      {
        std::lock_guard lock(mu_);
        requests_.push_back(body);
      }
      auto [status, text] = handler_(body);
      res.status = status;
      res.set_content(text, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::vector<json> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mu_;
  std::vector<json> requests_;
};

FakeService::Handler constant(int status, std::string body) {
  return [status, body](const json&) { return std::pair{status, body}; };
}

std::vector<Paragraph> two_paragraphs() {
  return {Paragraph{"Max Varnel", {"Max Varnel was a film director.", "He was French-born."}, 3},
          Paragraph{"Top Floor Girl", {"Top Floor Girl is a 1959 film."}, 0}};
}

TEST(Endpoint, Parse) {
  auto e = parse_endpoint("http://localhost:8080/");
  EXPECT_EQ(e.host, "localhost");
  EXPECT_EQ(e.port, 8080);
  e = parse_endpoint("model.internal:9000");
  EXPECT_EQ(e.host, "model.internal");
  EXPECT_EQ(e.port, 9000);
  EXPECT_EQ(parse_endpoint("http://svc").port, 80);
  EXPECT_THROW(parse_endpoint("https://svc:443"), ConfigError);
  EXPECT_THROW(parse_endpoint("http://svc:port"), ConfigError);
  EXPECT_THROW(parse_endpoint(""), ConfigError);
}

TEST(WireFormat, Requests) {
  EXPECT_EQ(extract_request("Who?"), json({{"question", "Who?"}}));
  const SubQuestion sq{"Max Varnel", "country of citizenship", 0, 2};
  const auto ctx = two_paragraphs();
  const auto r = read_request(sq, ctx);
  EXPECT_EQ(r["subject"], "Max Varnel");
  EXPECT_EQ(r["relation"], "country of citizenship");
  EXPECT_EQ(r["paragraphs"][1]["title"], "Top Floor Girl");
  EXPECT_EQ(r["paragraphs"][0]["sentences"][1], "He was French-born.");
  EXPECT_EQ(compare_request("q", "1985", "1996"), json({{"question", "q"}, {"first", "1985"}, {"last", "1996"}}));
}

TEST(WireFormat, ReadResponseMapsSourceToContextPosition) {
  const SubQuestion sq{"Max Varnel", "country of citizenship", 0, 2};
  const auto ctx = two_paragraphs();
  const auto a = parse_read_response(json::parse(R"({"answer": "French-born", "score": 0.8, "source": [0, 1]})"), sq, ctx);
  EXPECT_EQ(a.text, "French-born");
  EXPECT_DOUBLE_EQ(a.score, 0.8);
  EXPECT_EQ(a.source.paragraph, 3u);
  EXPECT_EQ(a.source.sentence, 1u);
  EXPECT_EQ(a.title, "Max Varnel");
  EXPECT_THROW(parse_read_response(json::parse(R"({"answer": null})"), sq, ctx), NoAnswer);
  EXPECT_THROW(parse_read_response(json::parse(R"({"answer": " ", "source": [0, 0]})"), sq, ctx), NoAnswer);
  EXPECT_THROW(parse_read_response(json::parse(R"({"answer": "x", "source": [1, 1]})"), sq, ctx), RemoteError);
  EXPECT_THROW(parse_read_response(json::parse(R"({"answer": "x", "source": [2, 0]})"), sq, ctx), RemoteError);
  EXPECT_THROW(parse_read_response(json::parse(R"({"answer": "x"})"), sq, ctx), RemoteError);
}

TEST(WireFormat, CompareResponse) {
  EXPECT_EQ(parse_compare_response(json::parse(R"({"state": 2})")), ComparisonState::FirstMeets);
  EXPECT_THROW(parse_compare_response(json::parse(R"({"state": 7})")), RemoteError);
  EXPECT_THROW(parse_compare_response(json::parse(R"({"state": "equal"})")), RemoteError);
}

TEST(WireFormat, ExtractResponseRoundTrip) {
  const auto body = json::parse(R"({
    "type_probs": [0.7, 0.1, 0.1, 0.1],
    "subjects": ["Kévin Ledanois"],
    "relation_scores": {"vocabulary": ["father", "place of birth", "director"],
                        "per_type": [[0.9, 0.8, 0.1], [0, 0, 1], [0, 0, 1], [0, 0, 1]]}})");
  const auto r = parse_extract_response(body);
  EXPECT_EQ(extract_response_to_json(r), body);
  EXPECT_THROW(parse_extract_response(json::parse(R"({"type_probs": [1, 0], "relation_spans": []})")), RemoteError);
  EXPECT_THROW(parse_extract_response(json::parse(R"({"type_probs": [0.5, 0.1, 0.1, 0.1], "relation_spans": []})")),
               RemoteError);
  EXPECT_THROW(parse_extract_response(json::parse(R"({"subjects": ["x"]})")), RemoteError);
}

TEST(WireClient, PostsTaskAndPayload) {
  FakeService svc(constant(200, R"({"state": 3})"));
  const WireClient client(svc.url());
  EXPECT_EQ(client.infer("compare", json{{"question", "q"}}), json({{"state", 3}}));
  const auto reqs = svc.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0]["task"], "compare");
  EXPECT_EQ(reqs[0]["payload"]["question"], "q");
}

TEST(WireClient, FailuresAreRemoteErrors) {
  {
    FakeService svc(constant(500, R"({"error": "boom"})"));
    EXPECT_THROW(WireClient(svc.url()).infer("read", json::object()), RemoteError);
  }
  {
    FakeService svc(constant(200, "not json"));
    EXPECT_THROW(WireClient(svc.url()).infer("read", json::object()), RemoteError);
  }
  {
    FakeService svc(constant(200, "[1, 2]"));
    EXPECT_THROW(WireClient(svc.url()).infer("read", json::object()), RemoteError);
  }
  int dead_port = 0;
  {
    httplib::Server s;
    dead_port = s.bind_to_any_port("127.0.0.1");
  }
  const WireClient client("http://127.0.0.1:" + std::to_string(dead_port), std::chrono::milliseconds(500));
  EXPECT_THROW(client.infer("read", json::object()), RemoteError);
}

TEST(RemoteExtractor, ClassifyFusesAndKeepsCueOrder) {
  // the fused ranking puts "place of birth" ahead of "father"; the question's
  // cue order restores the chain order
  FakeService svc(constant(200, R"({
    "type_probs": [0.8, 0.2, 0.0, 0.0],
    "subjects": ["Kévin Ledanois"],
    "relation_scores": {"vocabulary": ["father", "place of birth", "director"],
                        "per_type": [[0.6, 0.9, 0.1], [0.6, 0.2, 0.3], [0, 0, 0], [0, 0, 0]]}})"));
  const WireClient client(svc.url());
  const RemoteExtractor ex(client, ExtractionMode::Classify);
  const auto d = ex.extract("What is the place of birth of Kévin Ledanois's father?");
  EXPECT_EQ(d.qtype, QuestionType::Compositional);
  EXPECT_EQ(d.subjects, std::vector<std::string>{"Kévin Ledanois"});
  EXPECT_EQ(d.relations, (std::vector<std::string>{"father", "place of birth"}));
  ASSERT_TRUE(d.type_probs);
  EXPECT_DOUBLE_EQ((*d.type_probs)[0], 0.8);
}

TEST(RemoteExtractor, VocabularyFallbackAndSpanMode) {
  FakeService svc(constant(200, R"({
    "type_probs": [0.0, 0.0, 1.0, 0.0],
    "subjects": ["A", "B"],
    "relation_scores": {"per_type": [[0, 0], [0, 0], [0.2, 0.9], [0, 0]]},
    "relation_spans": ["came out"]})"));
  const WireClient client(svc.url());
  const RemoteExtractor cre(client, ExtractionMode::Classify, RelationLexicon::builtin(),
                            {"director", "publication date"});
  const auto d = cre.extract("Which film came out first, A or B?");
  EXPECT_EQ(d.qtype, QuestionType::Comparison);
  EXPECT_EQ(d.relations, std::vector<std::string>{"publication date"});
  const RemoteExtractor sre(client, ExtractionMode::Span);
  EXPECT_EQ(sre.extract("Which film came out first, A or B?").relations, std::vector<std::string>{"came out"});
  const RemoteExtractor no_vocab(client, ExtractionMode::Classify);
  EXPECT_THROW(no_vocab.extract("Which film came out first, A or B?"), DimensionMismatch);
}

TEST(RemoteReaderAndComparator, RoundTrip) {
  FakeService svc([](const json& req) -> std::pair<int, std::string> {
    if (req["task"] == "read") {
      if (req["payload"]["subject"] == "Nobody") return {200, R"({"answer": null, "score": 0})"};
      return {200, R"({"answer": "French-born", "score": 0.9, "source": [0, 1]})"};
    }
    if (req["task"] == "compare") return {200, R"({"state": 2})"};
    return {404, "{}"};
  });
  const WireClient client(svc.url());
  const RemoteReader reader(client);
  const auto ctx = two_paragraphs();
  const auto a = reader.read({"Max Varnel", "country of citizenship", 0, 2}, ctx, {});
  EXPECT_EQ(a.text, "French-born");
  EXPECT_EQ(a.source.paragraph, 3u);
  EXPECT_THROW(reader.read({"Nobody", "country of citizenship", 0, 1}, ctx, {}), NoAnswer);
  const RemoteComparator cmp(client);
  EXPECT_EQ(cmp.compare("Which came out earlier, A or B?", parse_value("1996"), parse_value("1985")),
            ComparisonState::FirstMeets);
  EXPECT_EQ(svc.requests().back()["payload"]["first"], "1996");
}

TEST(RemotePipeline, ServiceOutageDegradesToFallback) {
  int dead_port = 0;
  {
    httplib::Server s;
    dead_port = s.bind_to_any_port("127.0.0.1");
  }
  PipelineConfig cfg;
  cfg.extractor = ExtractorKind::RemoteCre;
  cfg.remote_endpoint = "http://127.0.0.1:" + std::to_string(dead_port);
  const Pipeline p(cfg);
  Example ex;
  ex.id = "x";
  ex.question = "Who is the father of Kévin Ledanois?";
  ex.context = {Paragraph{"Kévin Ledanois", {"Kévin Ledanois is the son of Yvon Ledanois."}, 0}};
  const auto rec = p.run(ex);
  EXPECT_TRUE(rec.low_confidence);
  EXPECT_FALSE(rec.answer.empty());
  EXPECT_FALSE(rec.failures.empty());
}

TEST(RemotePipeline, RemoteReaderDrivesTheChain) {
  FakeService svc([](const json& req) -> std::pair<int, std::string> {
    const auto& paras = req["payload"]["paragraphs"];
    for (std::size_t p = 0; p < paras.size(); ++p) {
      if (paras[p]["title"] == "Kévin Ledanois" && req["payload"]["relation"] == "father") {
        return {200, json{{"answer", "Yvon Ledanois"}, {"score", 1.0}, {"source", {p, 0}}}.dump()};
      }
    }
    return {200, R"({"answer": null})"};
  });
  PipelineConfig cfg;
  cfg.reader = ReaderKind::Remote;
  cfg.remote_endpoint = svc.url();
  const Pipeline p(cfg);
  Example ex;
  ex.id = "x";
  ex.question = "Who is the father of Kévin Ledanois?";
  ex.context = {Paragraph{"Other", {"Nothing here."}, 0},
                Paragraph{"Kévin Ledanois", {"Kévin Ledanois is the son of Yvon Ledanois."}, 1}};
  const auto rec = p.run(ex);
  EXPECT_EQ(rec.answer, "Yvon Ledanois");
  ASSERT_EQ(rec.supporting_facts.size(), 1u);
  EXPECT_EQ(rec.supporting_facts[0], (SupportingFact{"Kévin Ledanois", 0}));
  EXPECT_EQ(rec.evidence, (std::vector<EvidenceTriple>{{"Kévin Ledanois", "father", "Yvon Ledanois"}}));
}

}  // namespace
}  // namespace rerc
