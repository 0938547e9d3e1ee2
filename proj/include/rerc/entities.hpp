#pragma once

/// \file entities.hpp
/// Named-entity candidates for tree construction and answer extraction. The
/// built-in recognizer takes maximal runs of capitalized tokens (allowing
/// lowercase name particles between them) and never reports date or number
/// spans. Externally produced annotations can be loaded from a side file.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace rerc {

struct EntityMention {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
  bool possessive = false;  // written as "X's"

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

std::vector<EntityMention> extract_entities(std::string_view text);

/// Entity strings keyed by (example id, paragraph index, sentence index).
///
///   { "<example-id>": { "<paragraph>": { "<sentence>": ["Entity", ...] } } }
class EntityAnnotations {
 public:
  static EntityAnnotations load(const std::filesystem::path& path);
  static EntityAnnotations from_json_text(std::string_view json_text);

  const std::vector<std::string>* find(std::string_view example_id, std::size_t paragraph,
                                       std::size_t sentence) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<std::string>, std::less<>> entries_;
};

/// Mentions for one context sentence, identified by (paragraph, sentence).
using MentionSource =
    std::function<std::vector<EntityMention>(std::size_t paragraph, std::size_t sentence, std::string_view text)>;

MentionSource heuristic_mentions();

/// Looks annotations up for `example_id`; sentences without an entry fall back
/// to the heuristic recognizer. Mentions are anchored at their first verbatim
/// occurrence; annotated strings absent from the sentence keep an empty span.
MentionSource annotated_mentions(const EntityAnnotations& annotations, std::string example_id);

}  // namespace rerc
