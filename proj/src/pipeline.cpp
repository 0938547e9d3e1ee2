#include "rerc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"
#include "rerc/values.hpp"

namespace rerc {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(ExtractorKind k) {
  switch (k) {
    case ExtractorKind::Rule: return "rule";
    case ExtractorKind::RemoteCre: return "remote-cre";
    case ExtractorKind::RemoteSre: return "remote-sre";
  }
  return "rule";
}

std::string_view to_string(ReaderKind k) { return k == ReaderKind::Lexical ? "lexical" : "remote"; }

std::string_view to_string(ComparatorKind k) {
  return k == ComparatorKind::Deterministic ? "deterministic" : "remote";
}

std::optional<ExtractorKind> parse_extractor_kind(std::string_view s) {
  if (s == "rule") return ExtractorKind::Rule;
  if (s == "remote-cre") return ExtractorKind::RemoteCre;
  if (s == "remote-sre") return ExtractorKind::RemoteSre;
  return std::nullopt;
}

std::optional<ReaderKind> parse_reader_kind(std::string_view s) {
  if (s == "lexical") return ReaderKind::Lexical;
  if (s == "remote") return ReaderKind::Remote;
  return std::nullopt;
}

std::optional<ComparatorKind> parse_comparator_kind(std::string_view s) {
  if (s == "deterministic") return ComparatorKind::Deterministic;
  if (s == "remote") return ComparatorKind::Remote;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  similarity.validate();
  if (context_budget_tokens < 1) throw ConfigError("context_budget_tokens must be at least 1");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  const bool remote = extractor != ExtractorKind::Rule || reader == ReaderKind::Remote ||
                      comparator == ComparatorKind::Remote;
  if (remote && remote_endpoint.empty()) throw ConfigError("a remote backend needs remote_endpoint");
}

namespace {

template <class T>
T get_key(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + key + "\" has the wrong type");
  }
}

template <class E>
E get_enum(const json& j, const std::string& key, std::optional<E> (*parse)(std::string_view)) {
  const auto s = get_key<std::string>(j, key);
  const auto v = parse(s);
  if (!v) throw ConfigError("config key \"" + key + "\": unknown value \"" + s + "\"");
  return *v;
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError("config key \"" + key + "\" must be a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) { return from_json(j, PipelineConfig{}); }

PipelineConfig PipelineConfig::from_json(const json& j, PipelineConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "sigma_entity") {
      c.similarity.sigma_entity = get_key<double>(v, key);
    } else if (key == "sigma_relation") {
      c.similarity.sigma_relation = get_key<double>(v, key);
    } else if (key == "granularity") {
      const auto g = get_key<std::string>(v, key);
      if (g == "character") {
        c.similarity.granularity = Granularity::Character;
      } else if (g == "token") {
        c.similarity.granularity = Granularity::Token;
      } else {
        throw ConfigError("config key \"granularity\": unknown value \"" + g + "\"");
      }
    } else if (key == "context_budget_tokens") {
      c.context_budget_tokens = get_count(v, key);
    } else if (key == "extractor_backend") {
      c.extractor = get_enum<ExtractorKind>(v, key, parse_extractor_kind);
    } else if (key == "reader_backend") {
      c.reader = get_enum<ReaderKind>(v, key, parse_reader_kind);
    } else if (key == "comparator_backend") {
      c.comparator = get_enum<ComparatorKind>(v, key, parse_comparator_kind);
    } else if (key == "screening") {
      c.screening = get_enum<ScreeningStrategy>(v, key, parse_screening_strategy);
    } else if (key == "remote_endpoint") {
      c.remote_endpoint = get_key<std::string>(v, key);
    } else if (key == "parallelism") {
      c.parallelism = get_count(v, key);
    } else if (key == "question_cues") {
      c.question_cues = get_key<std::string>(v, key);
    } else if (key == "context_cues") {
      c.context_cues = get_key<std::string>(v, key);
    } else if (key == "polarity_table") {
      c.polarity_table = get_key<std::string>(v, key);
    } else if (key == "entity_annotations") {
      c.entity_annotations = get_key<std::string>(v, key);
    } else if (key == "relation_vocabulary") {
      c.relation_vocabulary = get_key<std::string>(v, key);
    } else if (key == "comparison_triple") {
      c.comparison_triple = get_key<bool>(v, key);
    } else {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  return c;
}

ordered_json PipelineConfig::to_json() const {
  ordered_json j;
  j["sigma_entity"] = similarity.sigma_entity;
  j["sigma_relation"] = similarity.sigma_relation;
  j["granularity"] = similarity.granularity == Granularity::Character ? "character" : "token";
  j["context_budget_tokens"] = context_budget_tokens;
  j["extractor_backend"] = to_string(extractor);
  j["reader_backend"] = to_string(reader);
  j["comparator_backend"] = to_string(comparator);
  j["screening"] = to_string(screening);
  j["remote_endpoint"] = remote_endpoint;
  j["parallelism"] = parallelism;
  j["question_cues"] = question_cues;
  j["context_cues"] = context_cues;
  j["polarity_table"] = polarity_table;
  j["entity_annotations"] = entity_annotations;
  j["relation_vocabulary"] = relation_vocabulary;
  j["comparison_triple"] = comparison_triple;
  return j;
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)), lexicon_(RelationLexicon::builtin()) {
  config_.validate();
  if (!config_.question_cues.empty()) lexicon_.load_question_cues(config_.question_cues);
  if (!config_.context_cues.empty()) lexicon_.load_context_cues(config_.context_cues);
  polarity_ = config_.polarity_table.empty() ? PolarityTable::builtin() : PolarityTable::load(config_.polarity_table);
  if (!config_.entity_annotations.empty()) annotations_ = EntityAnnotations::load(config_.entity_annotations);

  std::vector<std::string> vocabulary;
  if (!config_.relation_vocabulary.empty()) {
    try {
      vocabulary = json::parse(read_file(config_.relation_vocabulary)).get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw ConfigError("relation vocabulary: " + std::string(e.what()));
    }
  }
  if (!config_.remote_endpoint.empty()) client_ = std::make_unique<WireClient>(config_.remote_endpoint);

  switch (config_.extractor) {
    case ExtractorKind::Rule: extractor_ = std::make_unique<RuleBasedExtractor>(lexicon_); break;
    case ExtractorKind::RemoteCre:
      extractor_ = std::make_unique<RemoteExtractor>(*client_, ExtractionMode::Classify, lexicon_, vocabulary);
      break;
    case ExtractorKind::RemoteSre:
      extractor_ = std::make_unique<RemoteExtractor>(*client_, ExtractionMode::Span, lexicon_, vocabulary);
      break;
  }
  if (config_.reader == ReaderKind::Lexical) {
    reader_ = std::make_unique<LexicalReader>(lexicon_);
  } else {
    reader_ = std::make_unique<RemoteReader>(*client_);
  }
  if (config_.comparator == ComparatorKind::Deterministic) {
    comparator_ = std::make_unique<DeterministicComparator>(polarity_);
  } else {
    comparator_ = std::make_unique<RemoteComparator>(*client_);
  }
}

Pipeline::~Pipeline() = default;

std::string fallback_answer(const Example& ex) {
  const std::string* longest = nullptr;
  std::size_t longest_tokens = 0;
  for (const auto& p : ex.context) {
    for (const auto& s : p.sentences) {
      const std::size_t n = text::count_whitespace_tokens(s);
      if (!longest || n > longest_tokens) {
        longest = &s;
        longest_tokens = n;
      }
    }
  }
  if (!longest) return {};
  const auto mentions = extract_entities(*longest);
  if (!mentions.empty()) return mentions.front().text;
  const auto toks = text::tokenize(*longest);
  return toks.empty() ? std::string() : std::string(toks.front().view(*longest));
}

namespace {

struct ChainRun {
  std::optional<std::string> final_answer;
  bool complete = false;
};

void add_support(PredictionRecord& rec, const SubAnswer& a) {
  SupportingFact f{a.title, a.source.sentence};
  if (std::find(rec.supporting_facts.begin(), rec.supporting_facts.end(), f) == rec.supporting_facts.end()) {
    rec.supporting_facts.push_back(std::move(f));
  }
}

}  // namespace

PredictionRecord Pipeline::run(const Example& ex) const {
  PredictionRecord rec;
  rec.id = ex.id;

  auto degrade = [&](const std::string& why) {
    rec.failures.push_back(why);
    rec.answer = fallback_answer(ex);
    rec.low_confidence = true;
    return rec;
  };

  Decomposition d;
  std::vector<SubQuestion> plan;
  try {
    d = extract(ex.question, *extractor_);
    plan = compose_sub_questions(d);
  } catch (const std::exception& e) {
    return degrade(std::string("decompose: ") + e.what());
  }
  rec.decomposition = d;

  const std::span<const Paragraph> context(ex.context);
  std::optional<EntityTree> tree;
  if (config_.screening == ScreeningStrategy::Qetps) {
    TreeOptions opts;
    opts.similarity = config_.similarity;
    opts.lexicon = &lexicon_;
    if (annotations_) opts.mentions = annotated_mentions(*annotations_, ex.id);
    tree = build_entity_tree(d.subjects, d.relations, context, opts);
    rec.tree_levels = tree->level_entities();
  }

  auto screen = [&](const SubQuestion& sq) -> HopScreening {
    switch (config_.screening) {
      case ScreeningStrategy::Qetps:
        try {
          return screen_paragraphs(*tree, sq.hop, context, config_.context_budget_tokens);
        } catch (const EmptyTree& e) {
          rec.failures.push_back(std::string("screen: ") + e.what());
          return screen_in_order(sq.hop, context, config_.context_budget_tokens);
        }
      case ScreeningStrategy::None: return screen_in_order(sq.hop, context, config_.context_budget_tokens);
      case ScreeningStrategy::LexicalRank:
        return screen_lexical(sq.hop, sq.subject + " " + sq.relation, context, config_.context_budget_tokens);
    }
    return screen_in_order(sq.hop, context, config_.context_budget_tokens);
  };

  // chains run in plan order; hops within a chain see the previous answer
  std::vector<ChainRun> chains(d.subjects.size());
  std::optional<std::string> previous;
  std::size_t current_chain = static_cast<std::size_t>(-1);
  bool chain_broken = false;
  for (const auto& planned : plan) {
    if (planned.chain_id != current_chain) {
      current_chain = planned.chain_id;
      previous.reset();
      chain_broken = false;
    }
    if (chain_broken) continue;
    SubQuestion sq = planned;
    if (sq.subject == kAnswerPlaceholder) sq.subject = *previous;

    HopTrace hop;
    hop.sub_question = sq;
    if (ex.context.empty()) {
      hop.error = "empty context";
    } else {
      const HopScreening screened = screen(sq);
      for (const auto pos : screened.paragraphs) hop.screened.push_back(ex.context[pos].index);
      hop.tokens_used = screened.tokens_used;
      const auto admitted = screened_context(screened, context, config_.context_budget_tokens);
      try {
        hop.answer = rerc::read(sq, admitted, *reader_, config_.similarity);
      } catch (const std::exception& e) {
        hop.error = e.what();
      }
    }
    if (hop.answer) {
      previous = hop.answer->text;
      chains[sq.chain_id].final_answer = hop.answer->text;
      chains[sq.chain_id].complete = sq.hop == d.relations.size();
      add_support(rec, *hop.answer);
      rec.evidence.push_back(EvidenceTriple{sq.subject, sq.relation, hop.answer->text});
    } else {
      rec.failures.push_back("read " + std::to_string(sq.chain_id) + "." + std::to_string(sq.hop) + ": " + hop.error);
      chain_broken = true;
    }
    rec.hops.push_back(std::move(hop));
  }

  if (!is_comparison_family(d.qtype)) {
    const auto& c = chains.front();
    if (!c.final_answer) return degrade("no hop answered");
    rec.answer = *c.final_answer;
    rec.low_confidence = !c.complete;
    return rec;
  }

  const ChainRun& first = chains.front();
  const ChainRun& last = chains.back();
  if (!first.final_answer || !last.final_answer) {
    if (first.final_answer) {
      rec.answer = *first.final_answer;
      rec.low_confidence = true;
      rec.failures.push_back("compare: a chain produced no answer");
      return rec;
    }
    return degrade("compare: first chain produced no answer");
  }
  const ComparableValue a = parse_value(*first.final_answer);
  const ComparableValue b = parse_value(*last.final_answer);
  using Kind = ComparableValue::Kind;
  if (a.kind == Kind::Unparsed || b.kind == Kind::Unparsed) {
    if (is_equality_question(ex.question)) {
      rec.answer = text::normalize(a.raw) == text::normalize(b.raw) ? "yes" : "no";
    } else {
      rec.answer = *first.final_answer;
      rec.low_confidence = true;
    }
    rec.failures.push_back("compare: chain answers are not dates or numbers");
    return rec;
  }
  try {
    const ComparisonState state = comparator_->compare(ex.question, a, b);
    rec.comparison = ComparisonTrace{state, a.raw, b.raw};
    rec.answer = resolve_final(state, {d.subjects.front(), d.subjects.back()}, ex.question);
    if (config_.comparison_triple && a.kind == b.kind) {
      rec.evidence.push_back(EvidenceTriple{a.raw, comparison_relation(a, b), b.raw});
    }
  } catch (const std::exception& e) {
    rec.failures.push_back(std::string("compare: ") + e.what());
    rec.answer = *first.final_answer;
    rec.low_confidence = true;
  }
  return rec;
}

std::vector<PredictionRecord> Pipeline::run_split(std::span<const Example> examples, std::size_t parallelism) const {
  std::vector<PredictionRecord> out(examples.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, examples.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < examples.size(); ++i) out[i] = run(examples[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < examples.size(); i = next++) out[i] = run(examples[i]);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

PredictionRecord run_question(const Example& ex, const PipelineConfig& config) { return Pipeline(config).run(ex); }

ordered_json submission_json(std::span<const PredictionRecord> records) {
  ordered_json answer = ordered_json::object();
  ordered_json sp = ordered_json::object();
  ordered_json evidence = ordered_json::object();
  for (const auto& r : records) {
    answer[r.id] = r.answer;
    ordered_json facts = ordered_json::array();
    for (const auto& f : r.supporting_facts) facts.push_back(ordered_json::array({f.title, f.sentence}));
    sp[r.id] = std::move(facts);
    ordered_json triples = ordered_json::array();
    for (const auto& t : r.evidence) triples.push_back(ordered_json::array({t.subject, t.relation, t.object}));
    evidence[r.id] = std::move(triples);
  }
  ordered_json out;
  out["answer"] = std::move(answer);
  out["sp"] = std::move(sp);
  out["evidence"] = std::move(evidence);
  return out;
}

ordered_json trace_json(const PredictionRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    ordered_json dj;
    dj["type"] = to_string(d.qtype);
    dj["subjects"] = d.subjects;
    dj["relations"] = d.relations;
    if (d.type_probs) dj["type_probs"] = *d.type_probs;
    j["decomposition"] = std::move(dj);
  } else {
    j["decomposition"] = nullptr;
  }
  j["tree"] = r.tree_levels;
  ordered_json hops = ordered_json::array();
  for (const auto& h : r.hops) {
    ordered_json hj;
    hj["chain"] = h.sub_question.chain_id;
    hj["hop"] = h.sub_question.hop;
    hj["subject"] = h.sub_question.subject;
    hj["relation"] = h.sub_question.relation;
    hj["screened"] = h.screened;
    hj["tokens"] = h.tokens_used;
    if (h.answer) {
      hj["answer"] = h.answer->text;
      hj["score"] = h.answer->score;
      hj["source"] = ordered_json::array({h.answer->source.paragraph, h.answer->source.sentence});
    } else {
      hj["answer"] = nullptr;
      hj["error"] = h.error;
    }
    hops.push_back(std::move(hj));
  }
  j["hops"] = std::move(hops);
  if (r.comparison) {
    j["comparison"] = {{"state", static_cast<int>(r.comparison->state)},
                       {"label", to_string(r.comparison->state)},
                       {"first", r.comparison->first},
                       {"last", r.comparison->last}};
  } else {
    j["comparison"] = nullptr;
  }
  ordered_json ev = ordered_json::array();
  for (const auto& t : r.evidence) ev.push_back(ordered_json::array({t.subject, t.relation, t.object}));
  j["evidence"] = std::move(ev);
  j["answer"] = r.answer;
  j["low_confidence"] = r.low_confidence;
  j["failures"] = r.failures;
  return j;
}

}  // namespace rerc
