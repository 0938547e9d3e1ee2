#include "rerc/reader.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "rerc/entities.hpp"
#include "rerc/errors.hpp"
#include "rerc/text.hpp"
#include "rerc/values.hpp"

namespace rerc {

namespace {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool overlaps(Span a, Span b) { return a.begin < b.end && b.begin < a.end; }

std::size_t gap(Span a, Span b) {
  if (overlaps(a, b)) return 0;
  return a.end <= b.begin ? b.begin - a.end : a.begin - b.end;
}

bool is_stopword(std::string_view token) {
  static const std::set<std::string, std::less<>> kStop{
      "a",   "an",  "the", "of",    "in",   "on",  "at",   "by",   "to",  "for", "and", "or",  "is",
      "was", "are", "were", "be",   "been", "his", "her",  "its",  "their", "as", "with", "from", "who",
      "which", "that", "has", "had", "have", "also", "it", "he", "she", "they"};
  return kStop.count(text::to_lower_ascii(token)) != 0;
}

// First run of content tokens after the cue.
std::optional<Span> noun_phrase_after(std::string_view sentence, Span cue, Span subject) {
  std::optional<Span> out;
  for (const auto& tok : text::tokenize(sentence)) {
    if (tok.begin < cue.end) continue;
    const Span s{tok.begin, tok.end};
    if (overlaps(s, subject)) {
      if (out) break;
      continue;
    }
    if (is_stopword(tok.view(sentence))) {
      if (out) break;
      continue;
    }
    if (!out) {
      out = s;
    } else {
      // stop at a clause break between tokens
      const auto between = sentence.substr(out->end, tok.begin - out->end);
      if (between.find_first_of(",;:()") != std::string_view::npos) break;
      out->end = tok.end;
    }
  }
  return out;
}

std::optional<Span> nearest(const std::vector<Span>& candidates, Span cue, Span subject) {
  std::optional<Span> best;
  std::size_t best_gap = 0;
  for (const auto& c : candidates) {
    if (overlaps(c, subject) || overlaps(c, cue)) continue;
    const std::size_t g = gap(c, cue);
    if (!best || g < best_gap) {
      best = c;
      best_gap = g;
    }
  }
  return best;
}

std::vector<Span> as_spans(const std::vector<ValueSpan>& v) {
  std::vector<Span> out;
  for (const auto& s : v) out.push_back({s.begin, s.end});
  return out;
}

std::vector<Span> entity_spans(std::string_view sentence) {
  std::vector<Span> out;
  for (const auto& m : extract_entities(sentence)) out.push_back({m.begin, m.end});
  return out;
}

std::optional<Span> pick_candidate(std::string_view sentence, AnswerClass cls, Span cue, Span subject) {
  auto dates = [&] { return nearest(as_spans(find_date_spans(sentence)), cue, subject); };
  auto numbers = [&] { return nearest(as_spans(find_number_spans(sentence)), cue, subject); };
  auto entities = [&] { return nearest(entity_spans(sentence), cue, subject); };
  std::optional<Span> hit;
  switch (cls) {
    case AnswerClass::Temporal:
      if (!(hit = dates()) && !(hit = numbers())) hit = entities();
      break;
    case AnswerClass::Numeric:
      if (!(hit = numbers()) && !(hit = dates())) hit = entities();
      break;
    case AnswerClass::Entity:
      hit = entities();
      break;
  }
  if (!hit) hit = noun_phrase_after(sentence, cue, subject);
  return hit;
}

struct Scored {
  std::size_t position = 0;  // order in the screened context
  std::size_t paragraph = 0;
  std::size_t sentence = 0;
  double combined = 0.0;
  Span subject;
  Span cue;
};

}  // namespace

SubAnswer LexicalReader::read(const SubQuestion& sq, std::span<const Paragraph> context,
                              const SimilarityConfig& config) const {
  const Needle subject(sq.subject, config.granularity);
  std::vector<Needle> forms;
  for (const auto& f : lexicon_->surface_forms(sq.relation)) forms.emplace_back(f, config.granularity);

  std::vector<Scored> scored;
  std::size_t position = 0;
  for (std::size_t p = 0; p < context.size(); ++p) {
    const auto& para = context[p];
    for (std::size_t s = 0; s < para.sentences.size(); ++s, ++position) {
      const PreparedText prepared(para.sentences[s]);
      const auto subj = subject.locate(prepared, config.sigma_entity);
      if (!subj) continue;
      std::optional<Match> best_cue;
      for (const auto& f : forms) {
        const auto m = f.locate(prepared, config.sigma_relation);
        if (!m) continue;
        // the cue must lie outside the subject mention
        if (overlaps({m->begin, m->end}, {subj->begin, subj->end})) continue;
        if (!best_cue || m->score > best_cue->score) best_cue = m;
      }
      if (!best_cue) continue;
      scored.push_back({position, p, s, (subj->score + best_cue->score) / 2.0, {subj->begin, subj->end},
                        {best_cue->begin, best_cue->end}});
    }
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.combined > b.combined; });

  const AnswerClass cls = lexicon_->answer_class(sq.relation);
  for (const auto& c : scored) {
    const auto& para = context[c.paragraph];
    const std::string& sentence = para.sentences[c.sentence];
    const auto span = pick_candidate(sentence, cls, c.cue, c.subject);
    if (!span || span->end <= span->begin) continue;
    SubAnswer out;
    out.text = sentence.substr(span->begin, span->end - span->begin);
    out.score = c.combined;
    out.source = SentenceRef{para.index, c.sentence};
    out.title = para.title;
    out.sub_question = sq;
    return out;
  }
  throw NoAnswer("no sentence mentions \"" + sq.subject + "\" together with \"" + sq.relation + "\"");
}

SubAnswer read(const SubQuestion& sq, std::span<const Paragraph> context, const ReaderBackend& backend,
               const SimilarityConfig& config) {
  if (sq.subject == kAnswerPlaceholder) throw std::invalid_argument("sub-question subject is unresolved");
  if (context.empty()) throw NoAnswer("empty context");
  return backend.read(sq, context, config);
}

}  // namespace rerc
