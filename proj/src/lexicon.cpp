#include "rerc/lexicon.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "rerc/corpus.hpp"
#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

namespace {

const char* const kBuiltinQuestionCues = R"json({
  "director": "director",
  "directed": "director",
  "directors": "director",
  "composer": "composer",
  "composed": "composer",
  "producer": "producer",
  "produced": "producer",
  "performer": "performer",
  "sang": "performer",
  "singer": "performer",
  "author": "author",
  "wrote": "author",
  "writer": "author",
  "screenwriter": "screenwriter",
  "founder": "founded by",
  "founded": "founded by",
  "publisher": "publisher",
  "editor": "editor",
  "creator": "creator",
  "created": "creator",
  "father": "father",
  "dad": "father",
  "mother": "mother",
  "mom": "mother",
  "spouse": "spouse",
  "husband": "spouse",
  "wife": "spouse",
  "married": "spouse",
  "child": "child",
  "son": "child",
  "daughter": "child",
  "sibling": "sibling",
  "brother": "sibling",
  "sister": "sibling",
  "paternal grandfather": ["father", "father"],
  "paternal grandmother": ["father", "mother"],
  "maternal grandfather": ["mother", "father"],
  "maternal grandmother": ["mother", "mother"],
  "grandfather": ["father", "father"],
  "grandmother": ["father", "mother"],
  "grandson": ["child", "child"],
  "granddaughter": ["child", "child"],
  "grandchild": ["child", "child"],
  "father-in-law": ["spouse", "father"],
  "mother-in-law": ["spouse", "mother"],
  "son-in-law": ["child", "spouse"],
  "daughter-in-law": ["child", "spouse"],
  "stepmother": ["father", "spouse"],
  "stepfather": ["mother", "spouse"],
  "uncle": ["father", "sibling"],
  "aunt": ["father", "sibling"],
  "place of birth": "place of birth",
  "birthplace": "place of birth",
  "born": "date of birth",
  "date of birth": "date of birth",
  "birthday": "date of birth",
  "older": "date of birth",
  "younger": "date of birth",
  "elder": "date of birth",
  "oldest": "date of birth",
  "youngest": "date of birth",
  "place of death": "place of death",
  "date of death": "date of death",
  "died": "date of death",
  "die": "date of death",
  "dies": "date of death",
  "death": "date of death",
  "cause of death": "cause of death",
  "place of burial": "place of burial",
  "buried": "place of burial",
  "nationality": "country of citizenship",
  "citizenship": "country of citizenship",
  "citizen": "country of citizenship",
  "country of origin": "country of origin",
  "from the same country": "country of citizenship",
  "country": "country",
  "came out": "publication date",
  "come out": "publication date",
  "released": "publication date",
  "release": "publication date",
  "published": "publication date",
  "publication date": "publication date",
  "inception": "inception",
  "established": "inception",
  "educated": "educated at",
  "studied": "educated at",
  "school": "educated at",
  "university": "educated at",
  "award": "award received",
  "awards": "award received",
  "won": "award received",
  "employer": "employer",
  "work for": "employer",
  "worked for": "employer",
  "occupation": "occupation",
  "record label": "record label",
  "located": "country",
  "headquarters": "headquarters location",
  "population": "population"
})json";

const char* const kBuiltinContextCues = R"json({
  "directed by": "director",
  "directed": "director",
  "director": "director",
  "composed by": "composer",
  "music by": "composer",
  "produced by": "producer",
  "performed by": "performer",
  "written by": "author",
  "author": "author",
  "screenplay by": "screenwriter",
  "founded by": "founded by",
  "published by": "publisher",
  "edited by": "editor",
  "created by": "creator",
  "son of": "father",
  "daughter of": "father",
  "child of": "father",
  "father": "father",
  "mother": "mother",
  "married": "spouse",
  "wife": "spouse",
  "husband": "spouse",
  "widow": "spouse",
  "child": "child",
  "children": "child",
  "brother": "sibling",
  "sister": "sibling",
  "born in": "place of birth",
  "born": "date of birth",
  "birth": "date of birth",
  "birthplace": "place of birth",
  "native of": "place of birth",
  "died in": "place of death",
  "died": "date of death",
  "death": "date of death",
  "buried": "place of burial",
  "nationality": "country of citizenship",
  "citizen": "country of citizenship",
  "citizenship": "country of citizenship",
  "released": "publication date",
  "release": "publication date",
  "published": "publication date",
  "premiered": "publication date",
  "film": "publication date",
  "album": "publication date",
  "novel": "publication date",
  "founded": "inception",
  "established": "inception",
  "educated at": "educated at",
  "studied at": "educated at",
  "graduated": "educated at",
  "awarded": "award received",
  "won": "award received",
  "worked for": "employer",
  "employed": "employer",
  "located in": "country",
  "country": "country",
  "population": "population"
})json";

const std::set<std::string, std::less<>>& temporal_relations() {
  static const std::set<std::string, std::less<>> rel{
      "date of birth", "date of death", "publication date", "inception", "dissolved", "date of burial",
      "start time",    "end time",      "point in time"};
  return rel;
}

const std::set<std::string, std::less<>>& numeric_relations() {
  static const std::set<std::string, std::less<>> rel{"population", "height", "number of children", "duration",
                                                      "number of episodes", "area"};
  return rel;
}

nlohmann::json parse_table(std::string_view json_text, const char* what) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object cue -> relation");
  return doc;
}

}  // namespace

const RelationLexicon& RelationLexicon::builtin() {
  static const RelationLexicon lex = [] {
    RelationLexicon l;
    l.set_question_cues_from_json(kBuiltinQuestionCues);
    l.set_context_cues_from_json(kBuiltinContextCues);
    return l;
  }();
  return lex;
}

RelationLexicon RelationLexicon::empty() { return RelationLexicon{}; }

void RelationLexicon::set_question_cues_from_json(std::string_view json_text) {
  const auto doc = parse_table(json_text, "question cue table");
  question_cues_.clear();
  for (const auto& [cue, value] : doc.items()) {
    QuestionCue qc;
    qc.cue = text::normalize(cue);
    if (value.is_string()) {
      qc.relations.push_back(value.get<std::string>());
    } else if (value.is_array() && !value.empty()) {
      for (const auto& v : value) {
        if (!v.is_string()) throw ConfigError("question cue table: '" + cue + "' must map to strings");
        qc.relations.push_back(v.get<std::string>());
      }
    } else {
      throw ConfigError("question cue table: '" + cue + "' must map to a label or a list of labels");
    }
    if (!qc.cue.empty()) question_cues_.push_back(std::move(qc));
  }
  // Longer cues first so multiword cues claim their span before their parts.
  std::stable_sort(question_cues_.begin(), question_cues_.end(),
                   [](const QuestionCue& a, const QuestionCue& b) { return a.cue.size() > b.cue.size(); });
}

void RelationLexicon::set_context_cues_from_json(std::string_view json_text) {
  const auto doc = parse_table(json_text, "context cue table");
  context_cues_.clear();
  for (const auto& [cue, value] : doc.items()) {
    if (!value.is_string()) throw ConfigError("context cue table: '" + cue + "' must map to a label");
    context_cues_[value.get<std::string>()].push_back(cue);
  }
}

void RelationLexicon::load_question_cues(const std::filesystem::path& path) {
  set_question_cues_from_json(read_file(path));
}

void RelationLexicon::load_context_cues(const std::filesystem::path& path) {
  set_context_cues_from_json(read_file(path));
}

std::vector<std::string> RelationLexicon::surface_forms(std::string_view relation) const {
  std::vector<std::string> out{std::string(relation)};
  if (auto it = context_cues_.find(relation); it != context_cues_.end()) {
    for (const auto& cue : it->second) {
      if (std::find(out.begin(), out.end(), cue) == out.end()) out.push_back(cue);
    }
  }
  return out;
}

AnswerClass RelationLexicon::answer_class(std::string_view relation) const {
  const std::string key = text::normalize(relation);
  if (temporal_relations().count(key)) return AnswerClass::Temporal;
  if (numeric_relations().count(key)) return AnswerClass::Numeric;
  return AnswerClass::Entity;
}

}  // namespace rerc
