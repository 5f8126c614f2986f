#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json_fwd.hpp>

namespace ontocrawl {

// Stable identifier of a concept inside one hierarchy. Ids are handed out in
// discovery order and never reused, so they double as an insertion order.
struct ConceptId {
  std::uint32_t value = 0;

  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, ConceptId id) {
  return os << '#' << id.value;
}

struct Concept {
  ConceptId id;
  std::string canonical_name;
  // Alternate surface forms merged into this concept, in merge order.
  std::vector<std::string> synonym_names;
  std::optional<std::string> description;
  bool explored = false;
  // Shortest distance from the seed over direct edges; empty while the
  // concept is not yet attached.
  std::optional<std::size_t> depth;
};

using DirectEdge = std::pair<ConceptId, ConceptId>;  // (child, parent)

// A concept hierarchy rooted at a seed concept.
//
// Direct edges always form the transitive reduction of the subsumption
// relation; the reflexive-transitive closure is kept alongside as bitsets and
// updated incrementally when edges are added. Merges rebuild the closure from
// the edge set.
//
// Not internally synchronized: mutate from one owner, read concurrently only
// between mutations.
class ConceptHierarchy {
 public:
  // Throws InvalidInputError if `seed_name` is blank.
  explicit ConceptHierarchy(std::string_view seed_name);

  ConceptId seed() const noexcept { return seed_; }

  // Number of live concepts.
  std::size_t size() const noexcept { return live_count_; }

  bool contains(ConceptId id) const noexcept;

  const Concept& concept_at(ConceptId id) const;

  const std::string& name_of(ConceptId id) const {
    return concept_at(id).canonical_name;
  }

  // Live concept ids in ascending (discovery) order.
  std::vector<ConceptId> ids() const;

  // Looks up canonical and synonym names after normalization.
  std::optional<ConceptId> find(std::string_view name) const;

  // Adds an unattached concept; the caller is expected to connect it with
  // add_subsumption before the next structural query. Throws
  // InvalidInputError on a blank or already-known name.
  ConceptId add_concept(std::string_view name,
                        std::optional<std::string> description = std::nullopt);

  void set_description(ConceptId id, std::string description);
  void mark_explored(ConceptId id, bool explored = true);

  // Registers an extra surface form for an existing concept.
  void add_synonym_name(ConceptId id, std::string_view name);

  // True iff child ⊑ parent (reflexive, transitive).
  bool is_subsumed(ConceptId child, ConceptId parent) const;

  // Records child ⊑ parent. Edges that become implied are dropped from the
  // direct edge set. Returns false when the relation was already implied.
  // Throws CycleError if parent ⊑ child already holds.
  bool add_subsumption(ConceptId child, ConceptId parent);

  // Identifies two concepts. The one discovered first survives and receives
  // every name of the other; edges are unioned and re-reduced. Returns the
  // surviving id. Throws InvalidInputError when a == b and CycleError when a
  // third concept lies strictly between the two.
  ConceptId merge_synonyms(ConceptId a, ConceptId b);

  // Throws InternalError for a concept not connected to the seed.
  std::size_t depth_of(ConceptId id) const;

  // Shallowest unexplored concept with depth below the limit, ties broken by
  // discovery order. No limit means unbounded exploration.
  std::optional<ConceptId> next_unexplored(
      std::optional<std::size_t> exploration_depth) const;

  const std::set<ConceptId>& parents(ConceptId id) const;
  const std::set<ConceptId>& children(ConceptId id) const;

  // Strict ancestors / descendants in ascending id order.
  std::vector<ConceptId> ancestors(ConceptId id) const;
  std::vector<ConceptId> descendants(ConceptId id) const;

  // Direct edges sorted by (child, parent).
  std::vector<DirectEdge> direct_edges() const;
  std::size_t edge_count() const noexcept { return edge_count_; }

  // Recomputes closure, reduction and depths from scratch and compares them
  // with the maintained state. Throws InternalError on any mismatch.
  void verify() const;

  nlohmann::json to_json() const;
  // Throws InvalidInputError on malformed documents.
  static ConceptHierarchy from_json(const nlohmann::json& doc);

 private:
  struct Slot {
    Concept data;
    bool alive = false;
    std::set<ConceptId> parents;
    std::set<ConceptId> children;
    boost::dynamic_bitset<> up;    // up[x]: this ⊑ x
    boost::dynamic_bitset<> down;  // down[x]: x ⊑ this
  };

  ConceptHierarchy() = default;

  Slot& slot(ConceptId id);
  const Slot& slot(ConceptId id) const;
  void ensure_capacity(std::size_t n);
  void index_name(std::string_view name, ConceptId id);
  std::vector<std::string> chain_between(ConceptId from, ConceptId to) const;
  void rebuild_closure();
  void reduce_all();
  void recompute_depths();

  ConceptId seed_{};
  std::vector<Slot> slots_;
  std::size_t capacity_ = 0;
  std::size_t live_count_ = 0;
  std::size_t edge_count_ = 0;
  std::unordered_map<std::string, ConceptId> name_index_;
};

}  // namespace ontocrawl

template <>
struct std::hash<ontocrawl::ConceptId> {
  std::size_t operator()(ontocrawl::ConceptId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
