#include <gtest/gtest.h>

#include "rerc/errors.hpp"
#include "rerc/metrics.hpp"
#include "rerc/pipeline.hpp"

namespace rerc {
namespace {

using nlohmann::json;

const std::vector<Example>& worked() {
  static const auto examples = load_split(std::string(RERC_TEST_DATA) + "/worked_cases.json", true);
  return examples;
}

const std::vector<PredictionRecord>& worked_records() {
  static const auto records = Pipeline(PipelineConfig{}).run_split(worked(), 1);
  return records;
}

TEST(Pipeline, WorkedAnswers) {
  const std::vector<std::string> expected{"Montreuil-sous-Bois", "French-born",         "Aram + Aram = Kinnaram",
                                          "Osita Chidoka",       "Ralph Earnhardt",     "Maria Louisa Kissam",
                                          "La Estatua De Carne", "Chinese In Paris"};
  const auto& recs = worked_records();
  ASSERT_EQ(recs.size(), expected.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].id, worked()[i].id);
    EXPECT_EQ(normalize_answer(recs[i].answer), normalize_answer(expected[i])) << worked()[i].question;
  }
}

TEST(Pipeline, WorkedEvidenceChains) {
  const auto& recs = worked_records();
  EXPECT_EQ(recs[0].evidence, (std::vector<EvidenceTriple>{{"Kévin Ledanois", "father", "Yvon Ledanois"},
                                                           {"Yvon Ledanois", "place of birth", "Montreuil-sous-Bois"}}));
  EXPECT_EQ(recs[0].supporting_facts, (std::vector<SupportingFact>{{"Kévin Ledanois", 0}, {"Yvon Ledanois", 0}}));
  // comparisons carry the synthetic value triple last
  const auto& cmp = recs[7];
  ASSERT_TRUE(cmp.comparison);
  EXPECT_EQ(cmp.comparison->state, ComparisonState::LastMeets);
  ASSERT_FALSE(cmp.evidence.empty());
  EXPECT_EQ(cmp.evidence.back().relation, "less than");
}

TEST(Pipeline, ComparisonTripleCanBeDisabled) {
  PipelineConfig cfg;
  cfg.comparison_triple = false;
  const auto rec = Pipeline(cfg).run(worked()[7]);
  for (const auto& t : rec.evidence) EXPECT_NE(t.relation, "less than");
  EXPECT_EQ(rec.answer, worked_records()[7].answer);
}

TEST(Pipeline, PerTypeCounts) {
  const auto r = evaluate(parse_predictions(json(submission_json(worked_records()))), worked());
  EXPECT_EQ(r.n, 8u);
  for (auto t : {QuestionType::Compositional, QuestionType::Inference, QuestionType::Comparison,
                 QuestionType::BridgeComparison}) {
    EXPECT_EQ(r.n_per_type.at(t), 2u);
  }
  EXPECT_NEAR(r.overall.sp.f1, 1.0, 1e-12);
}

TEST(Pipeline, MalformedQuestionFallsBack) {
  Example ex = worked()[0];
  ex.question = "???";
  const auto rec = Pipeline(PipelineConfig{}).run(ex);
  EXPECT_TRUE(rec.low_confidence);
  EXPECT_FALSE(rec.failures.empty());
  EXPECT_EQ(rec.answer, fallback_answer(ex));
  EXPECT_FALSE(rec.answer.empty());
}

TEST(Pipeline, MissingSecondHopKeepsFirst) {
  Example ex = worked()[0];
  ex.context.erase(ex.context.begin() + 1);  // drop Yvon Ledanois's paragraph
  for (std::size_t i = 0; i < ex.context.size(); ++i) ex.context[i].index = i;
  const auto rec = Pipeline(PipelineConfig{}).run(ex);
  EXPECT_TRUE(rec.low_confidence);
  ASSERT_GE(rec.evidence.size(), 1u);
  EXPECT_EQ(rec.evidence.front(), (EvidenceTriple{"Kévin Ledanois", "father", "Yvon Ledanois"}));
  EXPECT_EQ(rec.answer, "Yvon Ledanois");
}

TEST(Pipeline, UnparsedComparisonValues) {
  Example ex;
  ex.id = "u";
  ex.qtype = QuestionType::Comparison;
  ex.question = "Are Alpha Film and Beta Film from the same country?";
  ex.context = {Paragraph{"Alpha Film", {"Alpha Film was made by a crew of French nationality."}, 0},
                Paragraph{"Beta Film", {"Beta Film was shot by a team of French nationality."}, 1}};
  const auto rec = Pipeline(PipelineConfig{}).run(ex);
  EXPECT_EQ(rec.answer, "yes");
  EXPECT_FALSE(rec.comparison);
}

TEST(Pipeline, EmptyContext) {
  Example ex = worked()[0];
  ex.context.clear();
  const auto rec = Pipeline(PipelineConfig{}).run(ex);
  EXPECT_TRUE(rec.low_confidence);
  EXPECT_TRUE(rec.answer.empty());
}

TEST(Pipeline, ScreeningStrategiesStillAnswer) {
  for (auto s : {ScreeningStrategy::None, ScreeningStrategy::LexicalRank}) {
    PipelineConfig cfg;
    cfg.screening = s;
    const auto rec = Pipeline(cfg).run(worked()[0]);
    EXPECT_EQ(rec.answer, "Montreuil-sous-Bois");
  }
}

TEST(Pipeline, RunSplitOrderAndParallelism) {
  const Pipeline p{PipelineConfig{}};
  EXPECT_TRUE(p.run_split({}, 4).empty());
  std::vector<Example> many;
  for (int r = 0; r < 6; ++r) {
    for (auto ex : worked()) {
      ex.id += "-" + std::to_string(r);
      many.push_back(std::move(ex));
    }
  }
  const auto serial = p.run_split(many, 1);
  const auto parallel = p.run_split(many, 8);
  ASSERT_EQ(serial.size(), many.size());
  for (std::size_t i = 0; i < many.size(); ++i) EXPECT_EQ(parallel[i].id, many[i].id);
  EXPECT_EQ(json(submission_json(serial)).dump(), json(submission_json(parallel)).dump());
}

TEST(Pipeline, SubmissionAndTraceShape) {
  const auto sub = json(submission_json(worked_records()));
  const auto& id = worked()[0].id;
  EXPECT_EQ(sub["answer"][id], "Montreuil-sous-Bois");
  EXPECT_EQ(sub["sp"][id][0], json::array({"Kévin Ledanois", 0}));
  EXPECT_EQ(sub["evidence"][id][1], json::array({"Yvon Ledanois", "place of birth", "Montreuil-sous-Bois"}));
  const auto trace = json(trace_json(worked_records()[0]));
  EXPECT_EQ(trace["id"], id);
  EXPECT_EQ(trace["hops"].size(), 2u);
  EXPECT_EQ(trace["tree"][0], json::array({"Kévin Ledanois"}));
  EXPECT_EQ(trace["low_confidence"], false);
}

TEST(PipelineConfig, JsonRoundTripAndValidation) {
  const auto cfg = PipelineConfig::from_json(json::parse(
      R"({"sigma_entity": 0.7, "granularity": "token", "screening": "lexical-rank", "parallelism": 3})"));
  EXPECT_DOUBLE_EQ(cfg.similarity.sigma_entity, 0.7);
  EXPECT_EQ(cfg.similarity.granularity, Granularity::Token);
  EXPECT_EQ(cfg.screening, ScreeningStrategy::LexicalRank);
  EXPECT_EQ(cfg.parallelism, 3u);
  const auto again = PipelineConfig::from_json(json(cfg.to_json()));
  EXPECT_EQ(json(again.to_json()).dump(), json(cfg.to_json()).dump());
  EXPECT_THROW(PipelineConfig::from_json(json::parse(R"({"sigma_entyty": 0.7})")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(json::parse(R"({"sigma_entity": 1.5})")).validate(), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(json::parse(R"({"context_budget_tokens": 0})")).validate(), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(json::parse(R"({"reader_backend": "remote"})")).validate(), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(json::parse(R"({"screening": "random"})")), ConfigError);
  EXPECT_NO_THROW(PipelineConfig::from_json(
                      json::parse(R"({"reader_backend": "remote", "remote_endpoint": "http://localhost:1"})"))
                      .validate());
}

}  // namespace
}  // namespace rerc
