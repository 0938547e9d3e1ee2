#include "rerc/qetps.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "rerc/errors.hpp"
#include "rerc/text.hpp"

namespace rerc {

std::string entity_key(std::string_view entity) {
  std::string key = text::normalize(entity);
  auto count = [&key](char c) { return std::count(key.begin(), key.end(), c); };
  constexpr std::string_view kTrailing = ".,;:!?\"'";
  bool changed = true;
  while (changed && !key.empty()) {
    changed = false;
    const char back = key.back();
    if (kTrailing.find(back) != std::string_view::npos ||
        (back == ')' && count(')') > count('(')) || (back == ']' && count(']') > count('['))) {
      key.pop_back();
      changed = true;
    }
    if (key.empty()) break;
    const char front = key.front();
    if ((front == '(' && count('(') > count(')')) || (front == '[' && count('[') > count(']')) ||
        front == '"' || front == '\'') {
      key.erase(key.begin());
      changed = true;
    }
  }
  while (!key.empty() && key.back() == ' ') key.pop_back();
  while (!key.empty() && key.front() == ' ') key.erase(key.begin());
  return key;
}

std::vector<std::size_t> EntityTree::level(std::size_t l) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].level == l) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::string>> EntityTree::level_entities() const {
  std::vector<std::vector<std::string>> out(depth_);
  for (const auto& n : nodes_) out[n.level].push_back(n.entity);
  return out;
}

std::optional<std::size_t> EntityTree::add_root(std::string entity) {
  std::string key = entity_key(entity);
  if (key.empty() || !visited_.insert(std::move(key)).second) return std::nullopt;
  nodes_.push_back(EntityNode{std::move(entity), 0, std::nullopt, std::nullopt, {}});
  depth_ = std::max<std::size_t>(depth_, 1);
  return nodes_.size() - 1;
}

std::optional<std::size_t> EntityTree::add_child(std::size_t parent, std::string entity, SentenceRef source) {
  std::string key = entity_key(entity);
  if (key.empty() || !visited_.insert(std::move(key)).second) return std::nullopt;
  const std::size_t level = nodes_.at(parent).level + 1;
  nodes_.push_back(EntityNode{std::move(entity), level, source, parent, {}});
  depth_ = std::max(depth_, level + 1);
  return nodes_.size() - 1;
}

void EntityTree::mark_located(std::size_t node, std::size_t paragraph) {
  auto& v = nodes_.at(node).located_in;
  if (std::find(v.begin(), v.end(), paragraph) == v.end()) v.push_back(paragraph);
}

namespace {

struct PreparedSentence {
  SentenceRef ref;
  PreparedText text;
  std::vector<EntityMention> mentions;
};

class RelationGate {
 public:
  RelationGate(const std::vector<std::string>& relations, const TreeOptions& options, std::size_t sentence_count)
      : threshold_(options.similarity.sigma_relation) {
    for (const auto& r : relations) {
      std::vector<Needle> forms;
      for (const auto& f : options.lexicon->surface_forms(r)) forms.emplace_back(f, options.similarity.granularity);
      forms_.push_back(std::move(forms));
    }
    cache_.assign(forms_.size(), std::vector<int>(sentence_count, -1));
  }

  // Whether the sentence admits children of a node at `level`.
  bool admits(std::size_t level, std::size_t sentence_id, const PreparedText& text) {
    if (forms_.empty()) return true;
    if (level < forms_.size()) return matches(level, sentence_id, text);
    for (std::size_t r = 0; r < forms_.size(); ++r) {
      if (matches(r, sentence_id, text)) return true;
    }
    return false;
  }

 private:
  bool matches(std::size_t relation, std::size_t sentence_id, const PreparedText& text) {
    int& slot = cache_[relation][sentence_id];
    if (slot < 0) {
      slot = 0;
      for (const auto& needle : forms_[relation]) {
        if (needle.locate(text, threshold_)) {
          slot = 1;
          break;
        }
      }
    }
    return slot == 1;
  }

  double threshold_;
  std::vector<std::vector<Needle>> forms_;
  std::vector<std::vector<int>> cache_;
};

bool overlaps(const EntityMention& m, const Match& match) {
  if (m.begin == m.end) return false;
  return m.begin < match.end && match.begin < m.end;
}

}  // namespace

EntityTree build_entity_tree(const std::vector<std::string>& question_entities,
                             const std::vector<std::string>& relations, std::span<const Paragraph> context,
                             const TreeOptions& options) {
  EntityTree tree;
  std::vector<std::size_t> frontier;
  for (const auto& e : question_entities) {
    if (auto id = tree.add_root(e)) frontier.push_back(*id);
  }

  std::vector<PreparedSentence> sentences;
  for (std::size_t p = 0; p < context.size(); ++p) {
    for (std::size_t s = 0; s < context[p].sentences.size(); ++s) {
      const auto& text = context[p].sentences[s];
      sentences.push_back(PreparedSentence{{p, s}, PreparedText(text), options.mentions(p, s, text)});
    }
  }
  RelationGate gate(relations, options, sentences.size());

  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t node_id : frontier) {
      // Copy: add_child may reallocate the node vector.
      const std::string entity = tree.node(node_id).entity;
      const std::size_t level = tree.node(node_id).level;
      const std::string own_key = entity_key(entity);
      const Needle needle(entity, options.similarity.granularity);
      for (std::size_t sid = 0; sid < sentences.size(); ++sid) {
        const auto& sent = sentences[sid];
        const auto hit = needle.locate(sent.text, options.similarity.sigma_entity);
        if (!hit) continue;
        tree.mark_located(node_id, sent.ref.paragraph);
        if (!gate.admits(level, sid, sent.text)) continue;
        for (const auto& mention : sent.mentions) {
          if (overlaps(mention, *hit) || entity_key(mention.text) == own_key) continue;
          if (auto child = tree.add_child(node_id, mention.text, sent.ref)) next.push_back(*child);
        }
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

std::string_view to_string(ScreeningStrategy s) {
  switch (s) {
    case ScreeningStrategy::Qetps: return "qetps";
    case ScreeningStrategy::None: return "none";
    case ScreeningStrategy::LexicalRank: return "lexical-rank";
  }
  return "qetps";
}

std::optional<ScreeningStrategy> parse_screening_strategy(std::string_view s) {
  if (s == "qetps") return ScreeningStrategy::Qetps;
  if (s == "none") return ScreeningStrategy::None;
  if (s == "lexical-rank" || s == "lexical") return ScreeningStrategy::LexicalRank;
  return std::nullopt;
}

std::size_t paragraph_tokens(const Paragraph& p) {
  std::size_t n = 0;
  for (const auto& s : p.sentences) n += text::count_whitespace_tokens(s);
  return n;
}

namespace {

HopScreening admit(std::size_t hop, const std::vector<std::size_t>& order, std::span<const Paragraph> context,
                   std::size_t budget) {
  HopScreening out;
  out.hop = hop;
  for (std::size_t p : order) {
    const std::size_t t = paragraph_tokens(context[p]);
    if (out.paragraphs.empty()) {
      out.paragraphs.push_back(p);
      out.top_truncated = t > budget;
      out.tokens_used = std::min(t, budget);
      continue;
    }
    if (out.tokens_used + t > budget) break;
    out.paragraphs.push_back(p);
    out.tokens_used += t;
  }
  return out;
}

}  // namespace

HopScreening screen_paragraphs(const EntityTree& tree, std::size_t hop, std::span<const Paragraph> context,
                               std::size_t budget_tokens) {
  if (tree.roots().empty()) throw EmptyTree("entity tree has no roots");
  if (hop == 0) throw std::invalid_argument("hop must be >= 1");

  constexpr std::size_t kUnassociated = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> distance(context.size(), kUnassociated);
  auto relax = [&](std::size_t p, std::size_t level) {
    if (p >= context.size()) return;
    const std::size_t d = level > hop ? level - hop : hop - level;
    distance[p] = std::min(distance[p], d);
  };
  for (const auto& n : tree.nodes()) {
    if (n.source) {
      relax(n.source->paragraph, n.level);
    } else {
      for (std::size_t p : n.located_in) relax(p, n.level);
    }
  }

  std::vector<std::size_t> order(context.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(),
                   [&distance](std::size_t a, std::size_t b) { return distance[a] < distance[b]; });
  return admit(hop, order, context, budget_tokens);
}

HopScreening screen_in_order(std::size_t hop, std::span<const Paragraph> context, std::size_t budget_tokens) {
  std::vector<std::size_t> order(context.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  return admit(hop, order, context, budget_tokens);
}

HopScreening screen_lexical(std::size_t hop, std::string_view query, std::span<const Paragraph> context,
                            std::size_t budget_tokens) {
  auto token_set = [](std::string_view s, std::set<std::string>& into) {
    for (const auto& t : text::tokenize(s)) into.insert(text::normalize(t.view(s)));
  };
  std::set<std::string> query_tokens;
  token_set(query, query_tokens);

  std::vector<std::size_t> score(context.size(), 0);
  for (std::size_t p = 0; p < context.size(); ++p) {
    std::set<std::string> para;
    token_set(context[p].title, para);
    for (const auto& s : context[p].sentences) token_set(s, para);
    for (const auto& q : query_tokens) score[p] += para.count(q);
  }
  std::vector<std::size_t> order(context.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(), [&score](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return admit(hop, order, context, budget_tokens);
}

std::vector<Paragraph> screened_context(const HopScreening& screening, std::span<const Paragraph> context,
                                        std::size_t budget_tokens) {
  std::vector<Paragraph> out;
  for (std::size_t p : screening.paragraphs) out.push_back(context[p]);
  if (screening.top_truncated && !out.empty()) {
    Paragraph& top = out.front();
    std::vector<std::string> kept;
    std::size_t used = 0;
    for (const auto& s : top.sentences) {
      const std::size_t t = text::count_whitespace_tokens(s);
      if (used + t <= budget_tokens) {
        kept.push_back(s);
        used += t;
        continue;
      }
      if (kept.empty()) kept.push_back(s.substr(0, text::prefix_of_whitespace_tokens(s, budget_tokens)));
      break;
    }
    top.sentences = std::move(kept);
  }
  return out;
}

}  // namespace rerc
