#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontocrawl/hierarchy.hpp"
#include "ontocrawl/oracle.hpp"

namespace ontocrawl {

struct Placement {
  // Id of the inserted concept, or of the concept it was merged into.
  ConceptId id;
  std::set<ConceptId> parents;
  std::set<ConceptId> children;
  std::optional<ConceptId> synonym_of;
  std::size_t probes_issued = 0;
  // Against testing both directions for every existing concept.
  std::size_t probes_saved = 0;
  // Probes whose answer could not be obtained and counted as "no".
  std::size_t probes_failed = 0;
  // Edges (child, parent) found by the searches but not applied.
  std::vector<DirectEdge> dropped_edges;
};

struct SearchResult {
  std::set<ConceptId> found;
  std::size_t probes_issued = 0;
  std::size_t probes_failed = 0;
};

struct KnownEdgeResult {
  bool added = false;
  // Survivor when the edge closed a cycle and the two ends were merged.
  std::optional<ConceptId> merged_into;
  std::optional<ConceptId> merged_away;
};

struct InsertionOptions {
  std::size_t max_parallel_probes = 8;
};

// Classifies new concepts into a hierarchy with the enhanced traversal of
// KRIS: the top search walks down from the seed and never asks about a
// concept below a failed test, the bottom search walks up from the leaves
// below the found superconcepts and never asks about a concept above a
// failed test. The discovering superconcept and its ancestors are taken as
// given.
class Inserter {
 public:
  // `base` supplies the seed name; the hierarchy's descriptions are added
  // per probe.
  Inserter(Oracle& oracle, ConceptHierarchy& hierarchy, OracleContext base,
           InsertionOptions options = {});

  // Most specific existing concepts subsuming `name`.
  SearchResult top_search(const std::string& name, const std::string* description,
                          ConceptId entry);
  // Most general existing concepts subsumed by `name`, looked for among the
  // found superconcepts and their descendants.
  SearchResult bottom_search(const std::string& name, const std::string* description,
                             ConceptId entry, const std::set<ConceptId>& parents);

  // Runs both searches, resolves synonym candidates and mutates the
  // hierarchy. `name` must not match an existing concept.
  Placement insert(const std::string& name, std::optional<std::string> description,
                   ConceptId entry);

  // Records that `existing` was listed again, now under `entry`, without
  // asking the oracle, unless the edge would close a cycle; then the two
  // ends are merged when the oracle calls them interchangeable.
  KnownEdgeResult add_known_edge(ConceptId existing, ConceptId entry);

 private:
  OracleContext context(const std::string& name, const std::string* description,
                        ConceptId entry, const char* phase) const;
  void describe_into(OracleContext& ctx, ConceptId id) const;
  std::vector<bool> probe(const std::vector<ConceptId>& batch, const OracleContext& ctx,
                          const std::string& name, bool name_below,
                          std::size_t& failed);

  Oracle& oracle_;
  ConceptHierarchy& h_;
  OracleContext base_;
  InsertionOptions options_;
};

}  // namespace ontocrawl
