#pragma once

/// \file reader.hpp
/// Answering one (subject, relation) sub-question against screened context.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rerc/corpus.hpp"
#include "rerc/decompose.hpp"
#include "rerc/lexicon.hpp"
#include "rerc/qetps.hpp"
#include "rerc/similarity.hpp"

namespace rerc {

struct SubAnswer {
  std::string text;
  double score = 0.0;
  SentenceRef source;  // paragraph is Paragraph::index, i.e. the original context position
  std::string title;   // title of the source paragraph
  SubQuestion sub_question;
};

class ReaderBackend {
 public:
  virtual ~ReaderBackend() = default;
  virtual SubAnswer read(const SubQuestion& sq, std::span<const Paragraph> context,
                         const SimilarityConfig& config) const = 0;
};

/// Picks the sentence where both the subject (sigma_entity) and a surface form
/// of the relation (sigma_relation) are found, best mean score first, and takes
/// from it the candidate nearest the relation cue: a date or number for
/// temporal and numeric relations, otherwise an entity or, failing that, the
/// noun phrase after the cue.
class LexicalReader final : public ReaderBackend {
 public:
  explicit LexicalReader(const RelationLexicon& lexicon = RelationLexicon::builtin()) : lexicon_(&lexicon) {}

  SubAnswer read(const SubQuestion& sq, std::span<const Paragraph> context,
                 const SimilarityConfig& config) const override;

 private:
  const RelationLexicon* lexicon_;
};

/// Checks the preconditions, then delegates. Throws NoAnswer on empty context
/// and std::invalid_argument for an unresolved placeholder subject.
SubAnswer read(const SubQuestion& sq, std::span<const Paragraph> context, const ReaderBackend& backend,
               const SimilarityConfig& config = {});

}  // namespace rerc
