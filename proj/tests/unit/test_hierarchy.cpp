#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/hierarchy.hpp"
#include "support/graph_oracle.hpp"
#include "support/mutation_trial.hpp"

using namespace ontocrawl;

namespace {

ConceptId attach(ConceptHierarchy& h, const std::string& name, ConceptId parent) {
  auto id = h.add_concept(name);
  h.add_subsumption(id, parent);
  return id;
}

}  // namespace

TEST(Hierarchy, BlankSeedIsRejected) {
  EXPECT_THROW(ConceptHierarchy(""), InvalidInputError);
  EXPECT_THROW(ConceptHierarchy("  \t "), InvalidInputError);
}

TEST(Hierarchy, NewHierarchyHoldsOnlyTheSeed) {
  ConceptHierarchy h("Goats");
  EXPECT_EQ(h.size(), 1u);
  EXPECT_EQ(h.name_of(h.seed()), "Goats");
  EXPECT_EQ(h.depth_of(h.seed()), 0u);
  EXPECT_EQ(h.edge_count(), 0u);
  EXPECT_EQ(h.next_unexplored(std::nullopt), h.seed());
}

TEST(Hierarchy, SubsumptionIsReflexive) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "Dairy Goats", h.seed());
  EXPECT_TRUE(h.is_subsumed(h.seed(), h.seed()));
  EXPECT_TRUE(h.is_subsumed(a, a));
  EXPECT_TRUE(h.is_subsumed(a, h.seed()));
  EXPECT_FALSE(h.is_subsumed(h.seed(), a));
}

TEST(Hierarchy, UnknownIdIsNotFound) {
  ConceptHierarchy h("Goats");
  EXPECT_THROW(h.is_subsumed(h.seed(), ConceptId{7}), NotFoundError);
  EXPECT_THROW(h.concept_at(ConceptId{7}), NotFoundError);
  EXPECT_THROW(h.add_subsumption(ConceptId{7}, h.seed()), NotFoundError);
}

TEST(Hierarchy, FindNormalizesNames) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "Dairy  Goats", h.seed());
  EXPECT_EQ(h.find("dairy goats"), a);
  EXPECT_EQ(h.find(" DAIRY GOATS "), a);
  EXPECT_FALSE(h.find("Meat Goats"));
  EXPECT_THROW(h.add_concept("dairy goats"), InvalidInputError);
}

TEST(Hierarchy, ImpliedEdgeIsNotAdded) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "Dairy Goats", h.seed());
  auto b = attach(h, "Saanen", a);
  EXPECT_FALSE(h.add_subsumption(b, h.seed()));
  EXPECT_EQ(h.edge_count(), 2u);
}

TEST(Hierarchy, NewEdgeRemovesRedundantOnes) {
  ConceptHierarchy h("Goats");
  auto dairy = attach(h, "Dairy Goats", h.seed());
  auto saanen = attach(h, "Saanen", h.seed());
  // Saanen goes below Dairy Goats; Goats -> Saanen is now implied.
  EXPECT_TRUE(h.add_subsumption(saanen, dairy));
  EXPECT_EQ(h.parents(saanen), std::set<ConceptId>{dairy});
  EXPECT_EQ(h.edge_count(), 2u);
  EXPECT_EQ(h.depth_of(saanen), 2u);
  h.verify();
}

TEST(Hierarchy, CycleIsRefusedWithPath) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "A", h.seed());
  auto b = attach(h, "B", a);
  auto c = attach(h, "C", b);
  try {
    h.add_subsumption(a, c);
    FAIL() << "expected CycleError";
  } catch (const CycleError& e) {
    // Existing chain, from the ancestor end down.
    EXPECT_EQ(e.path(), (std::vector<std::string>{"A", "B", "C"}));
  }
  EXPECT_EQ(h.edge_count(), 3u);
  h.verify();
}

TEST(Hierarchy, SeedCannotBeAChild) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "A", h.seed());
  EXPECT_THROW(h.add_subsumption(h.seed(), a), Error);
}

TEST(Hierarchy, SelfEdgeIsANoOp) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "A", h.seed());
  EXPECT_FALSE(h.add_subsumption(a, a));
}

TEST(Hierarchy, NextUnexploredIsBreadthFirstWithDepthLimit) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "A", h.seed());
  auto b = attach(h, "B", h.seed());
  auto c = attach(h, "C", a);
  EXPECT_EQ(h.next_unexplored(std::nullopt), h.seed());
  h.mark_explored(h.seed());
  EXPECT_EQ(h.next_unexplored(std::nullopt), a);
  h.mark_explored(a);
  EXPECT_EQ(h.next_unexplored(std::nullopt), b);
  h.mark_explored(b);
  EXPECT_EQ(h.next_unexplored(std::nullopt), c);
  EXPECT_FALSE(h.next_unexplored(std::size_t{2}));
  EXPECT_EQ(h.next_unexplored(std::size_t{3}), c);
}

TEST(Hierarchy, DisconnectedConceptHasNoDepth) {
  ConceptHierarchy h("Goats");
  auto a = h.add_concept("Loose");
  EXPECT_THROW(h.depth_of(a), InternalError);
}

TEST(Hierarchy, MergeKeepsAllNamesAndEdges) {
  ConceptHierarchy h("Goats");
  auto mini = attach(h, "Mini. Goats", h.seed());
  auto dairy = attach(h, "Dairy Goats", h.seed());
  auto nd = attach(h, "Nigerian Dwarf", dairy);
  auto dn = attach(h, "Dwarf Nigerian", mini);
  auto survivor = h.merge_synonyms(dn, nd);
  EXPECT_EQ(survivor, nd);
  EXPECT_EQ(h.size(), 4u);
  EXPECT_EQ(h.concept_at(nd).synonym_names, std::vector<std::string>{"Dwarf Nigerian"});
  EXPECT_EQ(h.find("dwarf nigerian"), nd);
  EXPECT_EQ(h.parents(nd), (std::set<ConceptId>{mini, dairy}));
  EXPECT_FALSE(h.contains(dn));
  h.verify();
}

TEST(Hierarchy, MergeIntoSeedKeepsSeed) {
  ConceptHierarchy h("Goats");
  auto g = attach(h, "Goat", h.seed());
  auto a = attach(h, "A", g);
  EXPECT_EQ(h.merge_synonyms(g, h.seed()), h.seed());
  EXPECT_EQ(h.parents(a), std::set<ConceptId>{h.seed()});
  h.verify();
}

TEST(Hierarchy, MergeAcrossAnIntermediateIsRefused) {
  ConceptHierarchy h("Goats");
  auto a = attach(h, "A", h.seed());
  auto b = attach(h, "B", a);
  auto c = attach(h, "C", b);
  EXPECT_THROW(h.merge_synonyms(a, c), CycleError);
  EXPECT_THROW(h.merge_synonyms(a, a), InvalidInputError);
  h.verify();
}

TEST(Hierarchy, JsonRoundTrip) {
  ConceptHierarchy h("Goats");
  auto a = h.add_concept("Dairy Goats", "Milk goats.");
  h.add_subsumption(a, h.seed());
  auto b = attach(h, "Mini. Goats", h.seed());
  auto c = attach(h, "Nigerian Dwarf", a);
  h.add_subsumption(c, b);
  h.add_synonym_name(c, "Nigerian Dwarf Goat");
  h.mark_explored(h.seed());
  const auto doc = h.to_json();
  const auto back = ConceptHierarchy::from_json(doc);
  EXPECT_EQ(back.to_json(), doc);
  EXPECT_EQ(back.find("nigerian dwarf goat"), c);
}

TEST(Hierarchy, MalformedJsonIsRejected) {
  ConceptHierarchy h("Goats");
  attach(h, "A", h.seed());
  auto doc = h.to_json();
  auto bad = doc;
  bad["version"] = 99;
  EXPECT_THROW(ConceptHierarchy::from_json(bad), InvalidInputError);
  bad = doc;
  bad["direct_edges"].push_back({0, 1});
  EXPECT_THROW(ConceptHierarchy::from_json(bad), InvalidInputError);
  bad = doc;
  bad["concepts"].push_back(
      {{"id", 5}, {"canonical_name", "Loose"}, {"synonyms", nlohmann::json::array()},
       {"description", nullptr}, {"explored", false}, {"depth", nullptr}});
  EXPECT_THROW(ConceptHierarchy::from_json(bad), InvalidInputError);
}

// ---------------------------------------------------------------------------
TEST(HierarchyProperty, RandomMutationSequencesKeepInvariants) {
  std::size_t violations = 0;
  std::size_t merges = 0;
  std::size_t twin_merges = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = testsupport::run_mutation_trial(trial);
    merges += r.merges;
    twin_merges += r.twin_merges;
    if (!r.failure.empty()) {
      ++violations;
      ADD_FAILURE() << "trial " << trial << ": " << r.failure;
    }
  }
  EXPECT_EQ(violations, 0u);
  EXPECT_GT(merges, 100u);
  EXPECT_GT(twin_merges, 10u);
}
