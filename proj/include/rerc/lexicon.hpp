#pragma once

/// \file lexicon.hpp
/// Relation vocabulary shared by the rule-based extractor, tree regulation and
/// the lexical reader.
///
/// Two cue tables, both JSON maps cue -> relation label:
///   - question cues: words in a question that name a relation. A value may be
///     a list of labels for kinship compounds ("mother-in-law" -> spouse,
///     mother), listed innermost hop first.
///   - context cues: words in a context sentence that express a relation
///     ("directed by" -> director, "son of" -> father).

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rerc {

enum class AnswerClass { Temporal, Numeric, Entity };

struct QuestionCue {
  std::string cue;  // normalized
  std::vector<std::string> relations;
};

class RelationLexicon {
 public:
  /// The built-in tables covering the 2WikiMultiHopQA relation inventory.
  static const RelationLexicon& builtin();

  /// An empty lexicon: relations match only their own label.
  static RelationLexicon empty();

  void set_question_cues_from_json(std::string_view json_text);
  void set_context_cues_from_json(std::string_view json_text);
  void load_question_cues(const std::filesystem::path& path);
  void load_context_cues(const std::filesystem::path& path);

  const std::vector<QuestionCue>& question_cues() const noexcept { return question_cues_; }

  /// The label itself first, then every context cue mapped to it.
  std::vector<std::string> surface_forms(std::string_view relation) const;

  AnswerClass answer_class(std::string_view relation) const;

  /// Comparison attributes (dates, counts) as opposed to bridging relations.
  bool is_attribute(std::string_view relation) const { return answer_class(relation) != AnswerClass::Entity; }

 private:
  std::vector<QuestionCue> question_cues_;
  std::map<std::string, std::vector<std::string>, std::less<>> context_cues_;  // label -> cues
};

}  // namespace rerc
