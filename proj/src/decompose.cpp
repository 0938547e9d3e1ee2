#include "rerc/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rerc/entities.hpp"
#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

void validate(const Decomposition& d) {
  if (d.subjects.empty()) throw InvariantViolation("decomposition has no subjects");
  if (d.relations.empty()) throw InvariantViolation("decomposition has no relations");
  if (d.type_probs) {
    const double sum = std::accumulate(d.type_probs->begin(), d.type_probs->end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6) throw InvariantViolation("type probabilities do not sum to 1");
  }
}

std::vector<std::string> fuse_relation_scores(std::span<const double> type_probs, const RelationScores& scores,
                                              std::size_t top_k) {
  if (type_probs.size() != kQuestionTypeCount) throw DimensionMismatch("type_probs must have 4 entries");
  const std::size_t k = scores.vocabulary.size();
  if (k == 0) throw DimensionMismatch("empty relation vocabulary");
  for (const auto& row : scores.per_type) {
    if (row.size() != k) throw DimensionMismatch("relation score row length differs from vocabulary size");
  }
  if (top_k == 0 || top_k > k) throw DimensionMismatch("top_k must be in [1, K]");
  const double sum = std::accumulate(type_probs.begin(), type_probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-6) throw InvariantViolation("type probabilities do not sum to 1");

  std::vector<double> fused(k, 0.0);
  for (std::size_t t = 0; t < kQuestionTypeCount; ++t) {
    for (std::size_t j = 0; j < k; ++j) fused[j] += type_probs[t] * scores.per_type[t][j];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&fused](std::size_t a, std::size_t b) { return fused[a] > fused[b]; });

  std::vector<std::string> out;
  for (std::size_t i = 0; i < top_k; ++i) out.push_back(scores.vocabulary[order[i]]);
  return out;
}

QuestionType argmax_type(std::span<const double> type_probs) {
  if (type_probs.size() != kQuestionTypeCount) throw DimensionMismatch("type_probs must have 4 entries");
  const auto it = std::max_element(type_probs.begin(), type_probs.end());
  return static_cast<QuestionType>(std::distance(type_probs.begin(), it));
}

std::size_t infer_top_k(QuestionType t, std::size_t detected_cues) {
  switch (t) {
    case QuestionType::Comparison: return 1;
    case QuestionType::BridgeComparison: return 2;
    case QuestionType::Inference: return std::max<std::size_t>(2, detected_cues);
    case QuestionType::Compositional: return std::max<std::size_t>(1, detected_cues);
  }
  return 1;
}

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;
};

struct CueHit {
  std::size_t segment;
  std::size_t begin;
  std::size_t end;
  const QuestionCue* cue;
};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

// Cue occurrences on word boundaries, longest cue first, no overlaps.
std::vector<CueHit> find_cues(const std::vector<std::string>& segments, const RelationLexicon& lexicon) {
  std::vector<CueHit> hits;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::string& seg = segments[s];
    std::vector<bool> taken(seg.size(), false);
    for (const auto& cue : lexicon.question_cues()) {
      std::size_t pos = seg.find(cue.cue);
      while (pos != std::string::npos) {
        const std::size_t end = pos + cue.cue.size();
        const bool left_ok = pos == 0 || !is_word_byte(static_cast<unsigned char>(seg[pos - 1]));
        const bool right_ok = end >= seg.size() || !is_word_byte(static_cast<unsigned char>(seg[end]));
        const bool free = std::none_of(taken.begin() + static_cast<std::ptrdiff_t>(pos),
                                       taken.begin() + static_cast<std::ptrdiff_t>(end), [](bool b) { return b; });
        if (left_ok && right_ok && free) {
          std::fill(taken.begin() + static_cast<std::ptrdiff_t>(pos), taken.begin() + static_cast<std::ptrdiff_t>(end),
                    true);
          hits.push_back({s, pos, end, &cue});
        }
        pos = seg.find(cue.cue, pos + 1);
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const CueHit& a, const CueHit& b) {
    return a.segment != b.segment ? a.segment < b.segment : a.begin < b.begin;
  });
  return hits;
}

// Normalized pieces of the question between (and around) the masked spans.
std::vector<std::string> segments_around(std::string_view q, std::vector<Span> masked) {
  std::sort(masked.begin(), masked.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  std::vector<std::string> out;
  std::size_t at = 0;
  for (const auto& m : masked) {
    out.push_back(text::normalize(q.substr(at, m.begin >= at ? m.begin - at : 0)));
    at = std::max(at, m.end);
  }
  out.push_back(text::normalize(q.substr(std::min(at, q.size()))));
  return out;
}

std::string first_word_lower(std::string_view q) {
  const auto toks = text::tokenize(q);
  return toks.empty() ? std::string() : text::to_lower_ascii(toks.front().view(q));
}

std::string wh_adjusted(const std::string& relation, const std::string& wh) {
  if (wh == "where") {
    if (relation == "date of birth") return "place of birth";
    if (relation == "date of death") return "place of death";
  }
  return relation;
}

bool only_possessive_marker(std::string_view between) {
  const std::string_view t = text::trim(between);
  return t.empty() || t == "'s" || t == "\xE2\x80\x99s" || t == "'";
}

struct Parsed {
  std::vector<std::string> subjects;
  std::vector<std::string> relations;
  bool composite = false;
  bool comparison = false;
  bool bridge = false;
};

Parsed parse_comparison(const std::vector<CueHit>& hits, const RelationLexicon& lexicon, const std::string& wh) {
  Parsed out;
  out.comparison = true;
  std::vector<std::string> bridge;
  std::optional<std::string> attribute;
  std::vector<std::string> entity_relations;
  for (const auto& h : hits) {
    for (const auto& r : h.cue->relations) {
      const std::string rel = wh_adjusted(r, wh);
      if (lexicon.is_attribute(rel)) {
        if (!attribute) attribute = rel;
      } else {
        entity_relations.push_back(rel);
      }
    }
    if (h.cue->relations.size() > 1) out.composite = true;
  }
  if (attribute) {
    out.relations = entity_relations;
    out.relations.push_back(*attribute);
  } else {
    out.relations = entity_relations;
  }
  out.bridge = out.relations.size() > 1;
  return out;
}

}  // namespace

Decomposition RuleBasedExtractor::extract(std::string_view question) const {
  const std::string_view q = text::trim(question);
  if (q.empty()) throw ExtractionFailed("empty question");
  const std::string wh = first_word_lower(q);

  Parsed parsed;

  // "..., A or B?"
  if (auto comma = q.find(','); comma != std::string_view::npos) {
    std::string_view rest = q.substr(comma + 1);
    while (!rest.empty() && (rest.back() == '?' || std::isspace(static_cast<unsigned char>(rest.back())))) {
      rest.remove_suffix(1);
    }
    if (auto orpos = rest.rfind(" or "); orpos != std::string_view::npos) {
      const auto a = text::trim(rest.substr(0, orpos));
      const auto b = text::trim(rest.substr(orpos + 4));
      if (!a.empty() && !b.empty()) {
        const auto hits = find_cues({text::normalize(q.substr(0, comma))}, *lexicon_);
        parsed = parse_comparison(hits, *lexicon_, wh);
        parsed.subjects = {std::string(a), std::string(b)};
      }
    }
  }

  // "Are A and B ...?"
  static const std::vector<std::string> kYesNo{"are", "is", "were", "was", "do", "does", "did", "have", "has"};
  if (!parsed.comparison && std::find(kYesNo.begin(), kYesNo.end(), wh) != kYesNo.end()) {
    const auto mentions = extract_entities(q);
    for (std::size_t i = 0; i + 1 < mentions.size(); ++i) {
      const auto between = text::to_lower_ascii(text::trim(q.substr(mentions[i].end, mentions[i + 1].begin - mentions[i].end)));
      if (between != "and") continue;
      const auto hits = find_cues(segments_around(q, {{mentions[i].begin, mentions[i].end},
                                                      {mentions[i + 1].begin, mentions[i + 1].end}}),
                                  *lexicon_);
      parsed = parse_comparison(hits, *lexicon_, wh);
      parsed.subjects = {mentions[i].text, mentions[i + 1].text};
      break;
    }
  }

  if (!parsed.comparison) {
    const auto mentions = extract_entities(q);
    if (mentions.empty()) throw ExtractionFailed("no subject entity in question");
    const EntityMention* subject = &mentions.back();
    for (const auto& m : mentions) {
      if (m.possessive) {
        subject = &m;
        break;
      }
    }
    parsed.subjects = {subject->text};

    const auto segs = segments_around(q, {{subject->begin, subject->end}});
    const auto hits = find_cues(segs, *lexicon_);
    // Chain order, innermost first: cues hanging off the possessive, then cues
    // before the subject from nearest to farthest, then any trailing cues.
    std::vector<const CueHit*> attached, before, after;
    std::size_t last_end = 0;
    bool chained = subject->possessive;
    for (const auto& h : hits) {
      if (h.segment == 0) {
        before.push_back(&h);
      } else if (chained && only_possessive_marker(std::string_view(segs[1]).substr(last_end, h.begin - last_end))) {
        attached.push_back(&h);
        last_end = h.end;
      } else {
        chained = false;
        after.push_back(&h);
      }
    }
    std::reverse(before.begin(), before.end());
    std::vector<const CueHit*> ordered;
    ordered.insert(ordered.end(), attached.begin(), attached.end());
    ordered.insert(ordered.end(), before.begin(), before.end());
    ordered.insert(ordered.end(), after.begin(), after.end());
    for (const auto* h : ordered) {
      for (const auto& r : h->cue->relations) parsed.relations.push_back(wh_adjusted(r, wh));
      if (h->cue->relations.size() > 1) parsed.composite = true;
    }
  }

  if (parsed.subjects.empty()) throw ExtractionFailed("no subject entity in question");
  if (parsed.relations.empty()) throw ExtractionFailed("no relation cue in question");

  Decomposition d;
  d.subjects = std::move(parsed.subjects);
  d.relations = std::move(parsed.relations);
  if (parsed.comparison) {
    d.qtype = parsed.bridge ? QuestionType::BridgeComparison : QuestionType::Comparison;
  } else {
    d.qtype = parsed.composite ? QuestionType::Inference : QuestionType::Compositional;
  }
  return d;
}

std::vector<std::string> RuleBasedExtractor::cue_relations(std::string_view question) const {
  try {
    return extract(question).relations;
  } catch (const ExtractionFailed&) {
    return {};
  }
}

Decomposition extract(std::string_view question, const ExtractorBackend& backend) {
  if (text::trim(question).empty()) throw ExtractionFailed("empty question");
  Decomposition d = backend.extract(question);
  if (d.subjects.empty()) throw ExtractionFailed("backend returned no subject");
  if (d.relations.empty()) throw ExtractionFailed("backend returned no relation");
  validate(d);
  return d;
}

std::vector<SubQuestion> compose_sub_questions(const Decomposition& d) {
  validate(d);
  std::vector<SubQuestion> out;
  auto chain = [&out, &d](std::size_t chain_id, const std::string& subject) {
    for (std::size_t j = 0; j < d.relations.size(); ++j) {
      out.push_back(SubQuestion{j == 0 ? subject : std::string(kAnswerPlaceholder), d.relations[j], chain_id, j + 1});
    }
  };
  switch (d.qtype) {
    case QuestionType::Compositional:
    case QuestionType::Inference:
      if (d.subjects.size() != 1) throw ArityMismatch("chain questions take exactly one subject");
      chain(0, d.subjects.front());
      break;
    case QuestionType::Comparison:
      if (d.subjects.size() < 2) throw ArityMismatch("comparison needs at least two subjects");
      if (d.relations.size() != 1) throw ArityMismatch("comparison shares exactly one relation");
      for (std::size_t i = 0; i < d.subjects.size(); ++i) chain(i, d.subjects[i]);
      break;
    case QuestionType::BridgeComparison:
      if (d.subjects.size() < 2) throw ArityMismatch("bridge comparison needs at least two subjects");
      for (std::size_t i = 0; i < d.subjects.size(); ++i) chain(i, d.subjects[i]);
      break;
  }
  return out;
}

}  // namespace rerc
