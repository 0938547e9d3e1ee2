#pragma once

/// \file qetps.hpp
/// Query-aware entity tree construction and hop-level paragraph screening.
///
/// The tree is a breadth-first fixpoint rooted at the question entities.
/// Expanding a node at level L searches every context sentence for it
/// (fuzzy, sigma_entity); entities co-occurring in a hit sentence become
/// level L+1 children, but only when the sentence also expresses the hop's
/// question relation (fuzzy, sigma_relation). Levels past the last relation
/// accept any question relation. An entity is inserted at most once, at the
/// shallowest level that reaches it.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rerc/corpus.hpp"
#include "rerc/entities.hpp"
#include "rerc/lexicon.hpp"
#include "rerc/similarity.hpp"

namespace rerc {

struct SentenceRef {
  std::size_t paragraph = 0;
  std::size_t sentence = 0;

  friend auto operator<=>(const SentenceRef&, const SentenceRef&) = default;
};

struct EntityNode {
  std::string entity;
  std::size_t level = 0;
  std::optional<SentenceRef> source;  // where the node was attached; empty for roots
  std::optional<std::size_t> parent;  // index into EntityTree::nodes()
  std::vector<std::size_t> located_in;  // paragraphs where the entity itself was found
};

/// Identity key for the visited set: normalized text with unbalanced edge
/// punctuation removed ("Montreuil-sous-Bois)" == "montreuil-sous-bois").
std::string entity_key(std::string_view entity);

class EntityTree {
 public:
  const std::vector<EntityNode>& nodes() const noexcept { return nodes_; }
  const EntityNode& node(std::size_t i) const { return nodes_.at(i); }

  std::vector<std::size_t> roots() const { return level(0); }
  std::vector<std::size_t> level(std::size_t l) const;
  /// Number of non-empty levels.
  std::size_t depth() const noexcept { return depth_; }
  std::vector<std::vector<std::string>> level_entities() const;

  bool contains(std::string_view entity) const { return visited_.count(entity_key(entity)) != 0; }
  const std::set<std::string, std::less<>>& visited() const noexcept { return visited_; }

  /// Returns the new node index, or nothing when the entity is already present.
  std::optional<std::size_t> add_root(std::string entity);
  std::optional<std::size_t> add_child(std::size_t parent, std::string entity, SentenceRef source);
  void mark_located(std::size_t node, std::size_t paragraph);

 private:
  std::vector<EntityNode> nodes_;
  std::set<std::string, std::less<>> visited_;
  std::size_t depth_ = 0;
};

struct TreeOptions {
  SimilarityConfig similarity;
  const RelationLexicon* lexicon = &RelationLexicon::builtin();
  MentionSource mentions = heuristic_mentions();
};

EntityTree build_entity_tree(const std::vector<std::string>& question_entities,
                             const std::vector<std::string>& relations, std::span<const Paragraph> context,
                             const TreeOptions& options = {});

enum class ScreeningStrategy { Qetps, None, LexicalRank };

std::string_view to_string(ScreeningStrategy s);
std::optional<ScreeningStrategy> parse_screening_strategy(std::string_view s);

/// The context admitted for one hop: positions into the context, best first.
struct HopScreening {
  std::size_t hop = 1;
  std::vector<std::size_t> paragraphs;
  std::size_t tokens_used = 0;
  bool top_truncated = false;  // the first paragraph alone exceeded the budget
};

/// Per-hop screening of one chain.
struct ScreeningResult {
  std::vector<HopScreening> per_hop;
};

std::size_t paragraph_tokens(const Paragraph& p);

/// Level-`hop` paragraphs first, then by tree distance |level - hop|, then
/// paragraphs unknown to the tree, all cut to the token budget. The first
/// paragraph is always admitted. Throws EmptyTree for a tree without roots.
HopScreening screen_paragraphs(const EntityTree& tree, std::size_t hop, std::span<const Paragraph> context,
                               std::size_t budget_tokens);

/// No screening: context order, cut to the budget.
HopScreening screen_in_order(std::size_t hop, std::span<const Paragraph> context, std::size_t budget_tokens);

/// Paragraphs ranked by how many distinct query tokens they contain.
HopScreening screen_lexical(std::size_t hop, std::string_view query, std::span<const Paragraph> context,
                            std::size_t budget_tokens);

/// Copies the admitted paragraphs in screening order, trimming the first one to
/// the budget when it was admitted oversized.
std::vector<Paragraph> screened_context(const HopScreening& screening, std::span<const Paragraph> context,
                                        std::size_t budget_tokens);

}  // namespace rerc
