#pragma once

// Hierarchies built directly, without an oracle, for export tests.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ontocrawl/hierarchy.hpp"
#include "ontocrawl/mock_oracle.hpp"
#include "support/graph_oracle.hpp"

namespace testsupport {

// The taxonomy's edges and descriptions, added in file order.
inline ontocrawl::ConceptHierarchy hierarchy_of(const ontocrawl::GroundTruthTaxonomy& t) {
  ontocrawl::ConceptHierarchy h(t.root);
  for (const auto& [c, p] : t.edges) {
    for (const auto& n : {p, c}) {
      if (!h.find(n)) {
        auto it = t.descriptions.find(n);
        h.add_concept(n, it == t.descriptions.end() ? std::nullopt
                                                    : std::optional<std::string>(it->second));
      }
    }
    h.add_subsumption(*h.find(c), *h.find(p));
  }
  for (const auto& [a, b] : t.synonyms) {
    const auto id = h.find(a);
    if (id && !h.find(b)) h.add_synonym_name(*id, b);
  }
  return h;
}

inline const std::vector<std::string>& awkward_names() {
  static const std::vector<std::string> names{
      "Fish & Chips", "<Tags>", "\"Quoted\"", "Café au lait", "Crème brûlée", "Ça va",
      "50% Juice",    "A/B testing", "Snow ❄ Cones", "日本茶", "It's"};
  return names;
}

// Random DAG of `n` concepts with markup-heavy names, multi-line
// descriptions and synonym names.
inline ontocrawl::ConceptHierarchy random_hierarchy(std::mt19937_64& rng, int n) {
  const auto g = random_dag(rng, n);
  ontocrawl::ConceptHierarchy h(g.names[0]);
  std::bernoulli_distribution coin(0.3);
  const auto& awkward = awkward_names();
  for (int i = 1; i < g.size(); ++i) {
    std::string name = g.names[i];
    if (coin(rng)) name += " " + awkward[rng() % awkward.size()];
    std::optional<std::string> desc;
    if (coin(rng)) desc = "Line one <b>&amp;\r\nline two\twith tab, " + name + ".";
    h.add_concept(name, desc);
  }
  auto id_of = [&](int i) { return h.ids()[static_cast<std::size_t>(i)]; };
  for (auto [c, p] : g.edges) h.add_subsumption(id_of(c), id_of(p));
  for (int i = 1; i < g.size(); ++i) {
    if (coin(rng)) h.add_synonym_name(id_of(i), "Alias " + std::to_string(i) + " & co");
    if (coin(rng) && coin(rng)) h.add_synonym_name(id_of(i), "Other " + std::to_string(i));
  }
  return h;
}

}  // namespace testsupport
