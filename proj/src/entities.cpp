#include "rerc/entities.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

#include "rerc/corpus.hpp"
#include "rerc/errors.hpp"
#include "rerc/text.hpp"
#include "rerc/values.hpp"

namespace rerc {

namespace {

std::size_t parse_position(const std::string& key) {
  if (key.empty() || key.size() > 9 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ConfigError("entity annotations: '" + key + "' is not a paragraph or sentence position");
  }
  return std::stoul(key);
}

// Lowercase particles allowed inside a name ("Fugitives for a Night").
constexpr std::array<std::string_view, 17> kParticles{
    "of", "de", "del", "della", "da", "du", "des", "la", "le", "von", "van", "der", "den", "for", "a", "an", "the"};

// Capitalized words that start sentences or questions rather than names.
constexpr std::array<std::string_view, 42> kLeadingFunctionWords{
    "in",    "on",    "at",    "by",   "from", "for",  "with", "after", "before", "during", "his",
    "her",   "its",   "their", "he",   "she",  "it",   "they", "who",   "whom",   "whose",  "what",
    "which", "when",  "where", "why",  "how",  "is",   "are",  "was",   "were",   "do",     "does",
    "did",   "and",   "but",   "also", "as",   "this", "that", "these", "there"};

// Words that cannot stand as an entity on their own.
constexpr std::array<std::string_view, 8> kBareArticles{"the", "a", "an", "la", "le", "el", "de", "l"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& words, std::string_view w) {
  const std::string lower = text::to_lower_ascii(w);
  return std::find(words.begin(), words.end(), lower) != words.end();
}

struct NameToken {
  std::size_t begin;
  std::size_t end;  // possessive suffix excluded
  bool possessive;
  bool capitalized;
  bool blocked;  // inside a date or number span
};

// Punctuation in a gap that separates two names ("Paris, France").
bool gap_breaks_run(std::string_view gap) {
  for (char c : gap) {
    switch (c) {
      case ',': case ';': case ':': case '(': case ')': case '[': case ']': case '.': case '!': case '?':
      case '"': case '/':
        return true;
      default:
        break;
    }
  }
  return false;
}

bool strip_possessive(std::string_view text, std::size_t begin, std::size_t& end) {
  const std::string_view tok = text.substr(begin, end - begin);
  for (std::string_view suffix : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
    if (tok.size() > suffix.size() && tok.substr(tok.size() - suffix.size()) == suffix) {
      end -= suffix.size();
      return true;
    }
  }
  if (tok.size() > 1 && (tok.back() == '\'')) {  // "Jones'"
    end -= 1;
    return true;
  }
  return false;
}

}  // namespace

std::vector<EntityMention> extract_entities(std::string_view text) {
  std::vector<ValueSpan> blocked_spans = find_date_spans(text);
  for (const auto& s : find_number_spans(text)) blocked_spans.push_back(s);

  std::vector<NameToken> toks;
  for (const auto& t : text::tokenize(text)) {
    NameToken nt{t.begin, t.end, false, false, false};
    nt.possessive = strip_possessive(text, nt.begin, nt.end);
    nt.capitalized = text::starts_with_uppercase(text.substr(nt.begin, nt.end - nt.begin));
    for (const auto& b : blocked_spans) {
      if (t.begin >= b.begin && t.end <= b.end) nt.blocked = true;
    }
    toks.push_back(nt);
  }

  std::vector<EntityMention> out;
  auto word = [&](std::size_t k) { return text.substr(toks[k].begin, toks[k].end - toks[k].begin); };
  auto flush = [&](std::size_t first, std::size_t last) {  // inclusive token range
    while (first <= last && contains(kLeadingFunctionWords, word(first))) ++first;
    while (last > first && !toks[last].capitalized) --last;  // trailing particles
    if (first > last || !toks[first].capitalized) return;
    if (first == last && contains(kBareArticles, word(first))) return;
    EntityMention m;
    m.begin = toks[first].begin;
    m.end = toks[last].end;
    m.text = std::string(text.substr(m.begin, m.end - m.begin));
    m.possessive = toks[last].possessive;
    out.push_back(std::move(m));
  };

  std::size_t i = 0;
  while (i < toks.size()) {
    if (!toks[i].capitalized || toks[i].blocked) {
      ++i;
      continue;
    }
    std::size_t last = i;
    std::size_t j = i + 1;
    while (j < toks.size() && !toks[j - 1].possessive && !toks[j].blocked) {
      const auto gap = text.substr(toks[j - 1].end, toks[j].begin - toks[j - 1].end);
      if (gap_breaks_run(gap)) break;
      if (toks[j].capitalized) {
        last = j;
      } else if (!contains(kParticles, word(j))) {
        break;
      }
      ++j;
    }
    flush(i, last);
    i = last + 1;
  }
  return out;
}

EntityAnnotations EntityAnnotations::from_json_text(std::string_view json_text) {
  EntityAnnotations ann;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("entity annotations: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("entity annotations: expected an object keyed by example id");
  for (const auto& [id, paragraphs] : doc.items()) {
    if (!paragraphs.is_object()) throw ConfigError("entity annotations: '" + id + "' must map paragraphs");
    for (const auto& [p, sentences] : paragraphs.items()) {
      if (!sentences.is_object()) throw ConfigError("entity annotations: paragraph entry must map sentences");
      for (const auto& [s, entities] : sentences.items()) {
        if (!entities.is_array()) throw ConfigError("entity annotations: expected a list of entity strings");
        std::vector<std::string> list;
        for (const auto& e : entities) {
          if (!e.is_string()) throw ConfigError("entity annotations: expected a list of entity strings");
          list.push_back(e.get<std::string>());
        }
        ann.entries_[{id, parse_position(p), parse_position(s)}] = std::move(list);
      }
    }
  }
  return ann;
}

EntityAnnotations EntityAnnotations::load(const std::filesystem::path& path) {
  return from_json_text(read_file(path));
}

const std::vector<std::string>* EntityAnnotations::find(std::string_view example_id, std::size_t paragraph,
                                                        std::size_t sentence) const {
  auto it = entries_.find(std::make_tuple(std::string(example_id), paragraph, sentence));
  return it == entries_.end() ? nullptr : &it->second;
}

MentionSource heuristic_mentions() {
  return [](std::size_t, std::size_t, std::string_view text) { return extract_entities(text); };
}

MentionSource annotated_mentions(const EntityAnnotations& annotations, std::string example_id) {
  return [&annotations, id = std::move(example_id)](std::size_t p, std::size_t s, std::string_view text) {
    const auto* list = annotations.find(id, p, s);
    if (list == nullptr) return extract_entities(text);
    std::vector<EntityMention> out;
    for (const auto& e : *list) {
      EntityMention m;
      m.text = e;
      if (auto pos = text.find(e); pos != std::string_view::npos) {
        m.begin = pos;
        m.end = pos + e.size();
      }
      out.push_back(std::move(m));
    }
    return out;
  };
}

}  // namespace rerc
