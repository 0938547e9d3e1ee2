#include "rerc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rerc/comparator.hpp"
#include "rerc/corpus.hpp"
#include "rerc/decompose.hpp"
#include "rerc/errors.hpp"
#include "rerc/metrics.hpp"
#include "rerc/pipeline.hpp"
#include "rerc/qetps.hpp"
#include "rerc/reader.hpp"

namespace rerc {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kEndpointEnv = "RERC_REMOTE_ENDPOINT";

struct ConfigFlags {
  std::string config_path;
  std::optional<double> sigma_entity;
  std::optional<double> sigma_relation;
  std::optional<std::string> granularity;
  std::optional<std::size_t> budget;
  std::optional<std::string> extractor;
  std::optional<std::string> reader;
  std::optional<std::string> comparator;
  std::optional<std::string> screening;
  std::optional<std::string> endpoint;
  std::optional<std::size_t> parallelism;
  std::optional<std::string> question_cues;
  std::optional<std::string> context_cues;
  std::optional<std::string> polarity;
  std::optional<std::string> annotations;
  std::optional<std::string> vocabulary;
  bool no_comparison_triple = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file with flat PipelineConfig keys");
    app->add_option("--sigma-entity", sigma_entity, "entity match threshold");
    app->add_option("--sigma-relation", sigma_relation, "relation match threshold");
    app->add_option("--granularity", granularity, "character | token");
    app->add_option("--budget", budget, "context budget in whitespace tokens");
    app->add_option("--extractor", extractor, "rule | remote-cre | remote-sre");
    app->add_option("--reader", reader, "lexical | remote");
    app->add_option("--comparator", comparator, "deterministic | remote");
    app->add_option("--screening", screening, "qetps | none | lexical-rank");
    app->add_option("--endpoint", endpoint, "inference server URL (overrides $RERC_REMOTE_ENDPOINT)");
    app->add_option("--parallelism,-j", parallelism, "questions processed concurrently");
    app->add_option("--question-cues", question_cues, "question cue table (JSON)");
    app->add_option("--context-cues", context_cues, "context cue table (JSON)");
    app->add_option("--polarity", polarity, "comparison polarity table (JSON)");
    app->add_option("--annotations", annotations, "per-sentence entity annotations (JSON)");
    app->add_option("--vocabulary", vocabulary, "relation vocabulary for classifier responses (JSON list)");
    app->add_flag("--no-comparison-triple", no_comparison_triple, "omit the synthetic comparison evidence triple");
  }

  PipelineConfig build() const {
    PipelineConfig c;
    if (!config_path.empty()) {
      json doc;
      try {
        doc = json::parse(read_file(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      c = PipelineConfig::from_json(doc, c);
    }
    if (const char* env = std::getenv(kEndpointEnv); env && *env) c.remote_endpoint = env;

    json flags = json::object();
    if (sigma_entity) flags["sigma_entity"] = *sigma_entity;
    if (sigma_relation) flags["sigma_relation"] = *sigma_relation;
    if (granularity) flags["granularity"] = *granularity;
    if (budget) flags["context_budget_tokens"] = *budget;
    if (extractor) flags["extractor_backend"] = *extractor;
    if (reader) flags["reader_backend"] = *reader;
    if (comparator) flags["comparator_backend"] = *comparator;
    if (screening) flags["screening"] = *screening;
    if (endpoint) flags["remote_endpoint"] = *endpoint;
    if (parallelism) flags["parallelism"] = *parallelism;
    if (question_cues) flags["question_cues"] = *question_cues;
    if (context_cues) flags["context_cues"] = *context_cues;
    if (polarity) flags["polarity_table"] = *polarity;
    if (annotations) flags["entity_annotations"] = *annotations;
    if (vocabulary) flags["relation_vocabulary"] = *vocabulary;
    if (no_comparison_triple) flags["comparison_triple"] = false;
    c = PipelineConfig::from_json(flags, c);
    c.validate();
    return c;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileNotFound("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

json read_stdin_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", "", std::string("stdin: ") + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError("", key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError("", key, e.what());
  }
}

// [[title, [sentences]]] or [{"title", "sentences"}]
std::vector<Paragraph> context_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("", "context", "expected an array");
  std::vector<Paragraph> out;
  for (const auto& e : j) {
    Paragraph p;
    try {
      if (e.is_array() && e.size() == 2) {
        p.title = e[0].get<std::string>();
        p.sentences = e[1].get<std::vector<std::string>>();
      } else if (e.is_object()) {
        p.title = e.at("title").get<std::string>();
        p.sentences = e.at("sentences").get<std::vector<std::string>>();
      } else {
        throw SchemaError("", "context", "expected [title, [sentences]] entries");
      }
    } catch (const json::exception& ex) {
      throw SchemaError("", "context", ex.what());
    }
    p.index = out.size();
    out.push_back(std::move(p));
  }
  return out;
}

ordered_json decomposition_json(const Decomposition& d) {
  ordered_json j;
  j["type"] = to_string(d.qtype);
  j["subjects"] = d.subjects;
  j["relations"] = d.relations;
  if (d.type_probs) j["type_probs"] = *d.type_probs;
  ordered_json subs = ordered_json::array();
  for (const auto& sq : compose_sub_questions(d)) {
    subs.push_back({{"chain", sq.chain_id}, {"hop", sq.hop}, {"subject", sq.subject}, {"relation", sq.relation}});
  }
  j["sub_questions"] = std::move(subs);
  return j;
}

std::unique_ptr<ExtractorBackend> make_extractor(const PipelineConfig& c, const RelationLexicon& lexicon,
                                                 std::unique_ptr<WireClient>& client) {
  if (c.extractor == ExtractorKind::Rule) return std::make_unique<RuleBasedExtractor>(lexicon);
  client = std::make_unique<WireClient>(c.remote_endpoint);
  return std::make_unique<RemoteExtractor>(
      *client, c.extractor == ExtractorKind::RemoteCre ? ExtractionMode::Classify : ExtractionMode::Span, lexicon);
}

RelationLexicon load_lexicon(const PipelineConfig& c) {
  RelationLexicon lex = RelationLexicon::builtin();
  if (!c.question_cues.empty()) lex.load_question_cues(c.question_cues);
  if (!c.context_cues.empty()) lex.load_context_cues(c.context_cues);
  return lex;
}

int cmd_run(const std::string& input, const std::string& out_path, const std::string& trace_path, bool lenient,
            const ConfigFlags& flags, std::ostream& err) {
  const PipelineConfig config = flags.build();
  LoadStats stats;
  const auto examples = load_split(input, !lenient, &stats);
  if (stats.skipped) err << "skipped " << stats.skipped << " malformed record(s)\n";
  const Pipeline pipeline(config);
  const auto records = pipeline.run_split(examples, config.parallelism);
  write_file(out_path, submission_json(records).dump(2) + "\n");
  if (!trace_path.empty()) {
    std::string lines;
    for (const auto& r : records) lines += trace_json(r).dump() + "\n";
    write_file(trace_path, lines);
  }
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path, const std::string& json_path,
             const std::string& csv_path, bool allow_partial, std::ostream& out) {
  const Predictions pred = load_predictions(pred_path);
  const auto gold = load_split(gold_path, true);
  const ScoreReport report = evaluate(pred, gold, allow_partial);
  out << report_table(report);
  if (!json_path.empty()) write_file(json_path, report_json(report).dump(2) + "\n");
  if (!csv_path.empty()) write_file(csv_path, report_csv(report));
  return 0;
}

int cmd_ablation(const std::string& input, const std::string& csv_path, const ConfigFlags& flags, std::ostream& out) {
  PipelineConfig base = flags.build();
  const auto examples = load_split(input, true);
  std::ostringstream csv;
  csv << "screening,metric,em,f1,precision,recall\n";
  out << "screening        answer EM/F1     sp EM/F1    evidence EM/F1   joint EM/F1\n";
  for (const auto strategy : {ScreeningStrategy::Qetps, ScreeningStrategy::None, ScreeningStrategy::LexicalRank}) {
    PipelineConfig c = base;
    c.screening = strategy;
    const Pipeline pipeline(c);
    const auto records = pipeline.run_split(examples, c.parallelism);
    const auto report = evaluate(parse_predictions(json::parse(submission_json(records).dump())), examples, false);
    char head[32];
    std::snprintf(head, sizeof head, "%-14s", std::string(to_string(strategy)).c_str());
    out << head;
    const std::pair<const char*, const Prf*> axes[] = {{"answer", &report.overall.answer},
                                                        {"sp", &report.overall.sp},
                                                        {"evidence", &report.overall.evidence},
                                                        {"joint", &report.overall.joint}};
    for (const auto& [name, p] : axes) {
      char cell[32];
      std::snprintf(cell, sizeof cell, "  %6.2f %6.2f", p->em * 100.0, p->f1 * 100.0);
      out << cell;
      csv << to_string(strategy) << ',' << name << ',' << p->em << ',' << p->f1 << ',' << p->precision << ','
          << p->recall << '\n';
    }
    out << '\n';
  }
  if (!csv_path.empty()) write_file(csv_path, csv.str());
  return 0;
}

int cmd_decompose(std::istream& in, std::ostream& out, const ConfigFlags& flags) {
  const PipelineConfig c = flags.build();
  const RelationLexicon lexicon = load_lexicon(c);
  std::unique_ptr<WireClient> client;
  const auto extractor = make_extractor(c, lexicon, client);
  const json req = read_stdin_json(in);
  const Decomposition d = extract(require<std::string>(req, "question"), *extractor);
  out << decomposition_json(d).dump(2) << '\n';
  return 0;
}

int cmd_screen(std::istream& in, std::ostream& out, const ConfigFlags& flags) {
  const PipelineConfig c = flags.build();
  const RelationLexicon lexicon = load_lexicon(c);
  const json req = read_stdin_json(in);
  const auto context = context_from_json(req.at("context"));
  const auto subjects = require<std::vector<std::string>>(req, "subjects");
  const auto relations = require<std::vector<std::string>>(req, "relations");
  const std::size_t hop = req.contains("hop") ? require<std::size_t>(req, "hop") : 1;
  TreeOptions opts;
  opts.similarity = c.similarity;
  opts.lexicon = &lexicon;
  const EntityTree tree = build_entity_tree(subjects, relations, context, opts);
  const HopScreening s = screen_paragraphs(tree, hop, context, c.context_budget_tokens);
  ordered_json j;
  j["tree"] = tree.level_entities();
  j["hop"] = s.hop;
  ordered_json titles = ordered_json::array();
  for (const auto pos : s.paragraphs) titles.push_back(context[pos].title);
  j["paragraphs"] = s.paragraphs;
  j["titles"] = std::move(titles);
  j["tokens_used"] = s.tokens_used;
  j["top_truncated"] = s.top_truncated;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_read(std::istream& in, std::ostream& out, const ConfigFlags& flags) {
  const PipelineConfig c = flags.build();
  const RelationLexicon lexicon = load_lexicon(c);
  const json req = read_stdin_json(in);
  const auto context = context_from_json(req.at("context"));
  SubQuestion sq{require<std::string>(req, "subject"), require<std::string>(req, "relation"), 0, 1};
  std::unique_ptr<WireClient> client;
  std::unique_ptr<ReaderBackend> reader;
  if (c.reader == ReaderKind::Lexical) {
    reader = std::make_unique<LexicalReader>(lexicon);
  } else {
    client = std::make_unique<WireClient>(c.remote_endpoint);
    reader = std::make_unique<RemoteReader>(*client);
  }
  const SubAnswer a = rerc::read(sq, context, *reader, c.similarity);
  ordered_json j;
  j["answer"] = a.text;
  j["score"] = a.score;
  j["source"] = ordered_json::array({a.source.paragraph, a.source.sentence});
  j["title"] = a.title;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_compare(std::istream& in, std::ostream& out, const ConfigFlags& flags) {
  const PipelineConfig c = flags.build();
  const json req = read_stdin_json(in);
  const auto question = require<std::string>(req, "question");
  const auto first = parse_value(require<std::string>(req, "first"));
  const auto last = parse_value(require<std::string>(req, "last"));
  const PolarityTable table = c.polarity_table.empty() ? PolarityTable::builtin() : PolarityTable::load(c.polarity_table);
  std::unique_ptr<WireClient> client;
  std::unique_ptr<ComparatorBackend> backend;
  if (c.comparator == ComparatorKind::Deterministic) {
    backend = std::make_unique<DeterministicComparator>(table);
  } else {
    client = std::make_unique<WireClient>(c.remote_endpoint);
    backend = std::make_unique<RemoteComparator>(*client);
  }
  const ComparisonState state = backend->compare(question, first, last);
  ordered_json j;
  j["state"] = static_cast<int>(state);
  j["label"] = to_string(state);
  if (req.contains("subjects")) {
    const auto subjects = require<std::vector<std::string>>(req, "subjects");
    if (subjects.size() != 2) throw SchemaError("", "subjects", "expected two subjects");
    j["answer"] = resolve_final(state, {subjects[0], subjects[1]}, question);
  }
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-hop question answering by relation extraction and reading comprehension", "rerc"};
  app.require_subcommand(1);

  ConfigFlags run_flags, ablation_flags, decompose_flags, screen_flags, read_flags, compare_flags;

  std::string input, out_path, trace_path;
  bool lenient = false;
  auto* run = app.add_subcommand("run", "run the pipeline over a split and write predictions");
  run->add_option("--input", input, "split file (JSON array)")->required();
  run->add_option("--out", out_path, "prediction file to write")->required();
  run->add_option("--trace", trace_path, "per-question trace (JSON lines)");
  run->add_flag("--lenient", lenient, "skip malformed records instead of failing");
  run_flags.attach(run);

  std::string pred_path, gold_path, json_path, csv_path;
  bool allow_partial = false;
  auto* eval = app.add_subcommand("eval", "score predictions against a gold split");
  eval->add_option("--pred", pred_path, "prediction file")->required();
  eval->add_option("--gold", gold_path, "gold split file")->required();
  eval->add_option("--json", json_path, "write the score report as JSON");
  eval->add_option("--csv", csv_path, "write the score report as CSV");
  eval->add_flag("--allow-partial", allow_partial, "score missing predictions as 0 instead of failing");

  std::string ablation_input, ablation_csv;
  auto* ablation = app.add_subcommand("ablation", "score the split under each screening strategy");
  ablation->add_option("--input", ablation_input, "split file with gold labels")->required();
  ablation->add_option("--csv", ablation_csv, "write the rows as CSV");
  ablation_flags.attach(ablation);

  auto* decompose = app.add_subcommand("decompose", "stdin {question} -> decomposition");
  decompose_flags.attach(decompose);
  auto* screen = app.add_subcommand("screen", "stdin {subjects, relations, context, hop} -> screened paragraphs");
  screen_flags.attach(screen);
  auto* read = app.add_subcommand("read", "stdin {subject, relation, context} -> sub-answer");
  read_flags.attach(read);
  auto* compare = app.add_subcommand("compare", "stdin {question, first, last[, subjects]} -> comparison state");
  compare_flags.attach(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(input, out_path, trace_path, lenient, run_flags, err);
    if (eval->parsed()) return cmd_eval(pred_path, gold_path, json_path, csv_path, allow_partial, out);
    if (ablation->parsed()) return cmd_ablation(ablation_input, ablation_csv, ablation_flags, out);
    if (decompose->parsed()) return cmd_decompose(in, out, decompose_flags);
    if (screen->parsed()) return cmd_screen(in, out, screen_flags);
    if (read->parsed()) return cmd_read(in, out, read_flags);
    if (compare->parsed()) return cmd_compare(in, out, compare_flags);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace rerc
