#include "rerc/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

using nlohmann::json;

std::string_view to_string(QuestionType t) {
  switch (t) {
    case QuestionType::Compositional: return "compositional";
    case QuestionType::Inference: return "inference";
    case QuestionType::Comparison: return "comparison";
    case QuestionType::BridgeComparison: return "bridge_comparison";
  }
  return "compositional";
}

std::optional<QuestionType> parse_question_type(std::string_view s) {
  std::string key = text::to_lower_ascii(text::trim(s));
  for (char& c : key) {
    if (c == ' ' || c == '-') c = '_';
  }
  if (key == "compositional") return QuestionType::Compositional;
  if (key == "inference") return QuestionType::Inference;
  if (key == "comparison") return QuestionType::Comparison;
  if (key == "bridge_comparison" || key == "bridgecomparison") return QuestionType::BridgeComparison;
  return std::nullopt;
}

bool is_comparison_family(QuestionType t) {
  return t == QuestionType::Comparison || t == QuestionType::BridgeComparison;
}

void validate(const Example& ex) {
  auto fail = [&ex](const std::string& what) { throw InvariantViolation("record '" + ex.id + "': " + what); };
  if (ex.id.empty()) fail("empty id");
  std::set<std::size_t> indices;
  for (const auto& p : ex.context) {
    if (p.sentences.empty()) fail("paragraph '" + p.title + "' has no sentences");
    if (!indices.insert(p.index).second) fail("duplicate paragraph index");
  }
  for (const auto& sf : ex.supporting_facts) {
    bool found = false;
    bool title_seen = false;
    for (const auto& p : ex.context) {
      if (p.title != sf.title) continue;
      title_seen = true;
      if (sf.sentence < p.sentences.size()) found = true;
    }
    if (!title_seen) fail("supporting fact title '" + sf.title + "' not in context");
    if (!found) fail("supporting fact sentence index out of range for '" + sf.title + "'");
  }
  for (const auto& t : ex.gold_evidence) {
    if (text::trim(t.subject).empty() || text::trim(t.relation).empty() || text::trim(t.object).empty()) {
      fail("evidence triple with an empty field");
    }
  }
}

namespace {

std::string record_id_of(const json& record) {
  if (record.is_object()) {
    auto it = record.find("_id");
    if (it != record.end() && it->is_string()) return it->get<std::string>();
  }
  return "<unknown>";
}

const json& require(const json& record, const char* field, const std::string& id) {
  auto it = record.find(field);
  if (it == record.end()) throw SchemaError(id, field, "missing");
  return *it;
}

std::string require_string(const json& v, const char* field, const std::string& id) {
  if (!v.is_string()) throw SchemaError(id, field, "expected a string");
  return v.get<std::string>();
}

}  // namespace

Example example_from_json(const json& record) {
  const std::string id = record_id_of(record);
  if (!record.is_object()) throw SchemaError(id, "<record>", "expected an object");

  Example ex;
  ex.id = require_string(require(record, "_id", id), "_id", id);
  ex.question = require_string(require(record, "question", id), "question", id);
  const std::string type = require_string(require(record, "type", id), "type", id);
  auto qt = parse_question_type(type);
  if (!qt) throw SchemaError(id, "type", "unknown question type '" + type + "'");
  ex.qtype = *qt;

  const json& ctx = require(record, "context", id);
  if (!ctx.is_array()) throw SchemaError(id, "context", "expected an array");
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const json& entry = ctx[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() || !entry[1].is_array()) {
      throw SchemaError(id, "context", "expected [title, [sentences]]");
    }
    Paragraph p;
    p.title = entry[0].get<std::string>();
    p.index = i;
    for (const auto& s : entry[1]) p.sentences.push_back(require_string(s, "context", id));
    ex.context.push_back(std::move(p));
  }

  if (auto it = record.find("answer"); it != record.end()) ex.gold_answer = require_string(*it, "answer", id);

  if (auto it = record.find("supporting_facts"); it != record.end()) {
    if (!it->is_array()) throw SchemaError(id, "supporting_facts", "expected an array");
    std::set<SupportingFact> seen;
    for (const auto& sf : *it) {
      if (!sf.is_array() || sf.size() != 2 || !sf[0].is_string() || !sf[1].is_number_integer() || sf[1].get<long long>() < 0) {
        throw SchemaError(id, "supporting_facts", "expected [title, sentence-index]");
      }
      SupportingFact fact{sf[0].get<std::string>(), sf[1].get<std::size_t>()};
      if (seen.insert(fact).second) ex.supporting_facts.push_back(std::move(fact));
    }
  }

  if (auto it = record.find("evidences"); it != record.end()) {
    if (!it->is_array()) throw SchemaError(id, "evidences", "expected an array");
    for (const auto& t : *it) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() || !t[2].is_string()) {
        throw SchemaError(id, "evidences", "expected [subject, relation, object]");
      }
      ex.gold_evidence.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    }
  }
  return ex;
}

nlohmann::ordered_json example_to_json(const Example& ex) {
  nlohmann::ordered_json out;
  out["_id"] = ex.id;
  out["type"] = std::string(to_string(ex.qtype));
  out["question"] = ex.question;
  auto ctx = nlohmann::ordered_json::array();
  for (const auto& p : ex.context) ctx.push_back({p.title, p.sentences});
  out["context"] = std::move(ctx);
  auto sfs = nlohmann::ordered_json::array();
  for (const auto& sf : ex.supporting_facts) sfs.push_back({sf.title, sf.sentence});
  out["supporting_facts"] = std::move(sfs);
  auto evs = nlohmann::ordered_json::array();
  for (const auto& t : ex.gold_evidence) evs.push_back({t.subject, t.relation, t.object});
  out["evidences"] = std::move(evs);
  out["answer"] = ex.gold_answer;
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Example> parse_split(const json& doc, bool strict, LoadStats* stats) {
  if (!doc.is_array()) throw SchemaError("<file>", "<root>", "expected a JSON array");
  LoadStats local;
  LoadStats& st = stats ? *stats : local;
  std::vector<Example> out;
  std::set<std::string> ids;
  for (const auto& record : doc) {
    try {
      Example ex = example_from_json(record);
      validate(ex);
      if (!ids.insert(ex.id).second) throw InvariantViolation("duplicate id '" + ex.id + "'");
      out.push_back(std::move(ex));
      ++st.loaded;
    } catch (const Error& e) {
      if (strict) throw;
      ++st.skipped;
      st.problems.emplace_back(e.what());
    }
  }
  return out;
}

std::vector<Example> load_split(const std::filesystem::path& path, bool strict, LoadStats* stats) {
  if (!std::filesystem::exists(path)) throw FileNotFound("no such file: '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("<file>", "<root>", e.what());
  }
  return parse_split(doc, strict, stats);
}

nlohmann::ordered_json serialize_split(const std::vector<Example>& examples) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& ex : examples) out.push_back(example_to_json(ex));
  return out;
}

const IndexedSentence* SentenceIndex::find(std::string_view example_id, std::string_view title,
                                           std::size_t sentence) const {
  auto it = by_fact_.find(std::make_tuple(std::string(example_id), std::string(title), sentence));
  return it == by_fact_.end() ? nullptr : &entries_[it->second];
}

SentenceIndex index_sentences(const std::vector<Example>& examples) {
  SentenceIndex index;
  for (const auto& ex : examples) {
    for (const auto& p : ex.context) {
      for (std::size_t s = 0; s < p.sentences.size(); ++s) {
        index.by_fact_.emplace(std::make_tuple(ex.id, p.title, s), index.entries_.size());
        index.entries_.push_back({ex.id, p.index, s, p.sentences[s]});
      }
    }
  }
  return index;
}

}  // namespace rerc
