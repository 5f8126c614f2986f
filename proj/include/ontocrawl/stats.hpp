#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontocrawl/hierarchy.hpp"
#include "ontocrawl/ledger.hpp"

namespace ontocrawl {

struct CrawlConfig;
struct CrawlState;

struct CrawlStats {
  std::string seed;
  std::optional<int> exploration_depth;
  int ft = 0;
  std::size_t n_C = 0;
  std::size_t n_D = 0;
  std::size_t n_sub = 0;
  std::size_t n_sub_ins = 0;
  std::size_t requests = 0;
  double prompts_per_concept = 0.0;
  double cost_dollars = 0.0;
  std::size_t concepts_at_or_below_cutoff = 0;
  std::size_t concepts_above_cutoff = 0;
  // Number of concepts per depth, seed included.
  std::map<std::size_t, std::size_t> depth_histogram;
  // Number of concepts per count of direct subconcepts.
  std::map<std::size_t, std::size_t> outdegree_histogram;
  std::size_t max_outdegree = 0;
  double avg_outdegree = 0.0;
  std::size_t probes_issued = 0;
  std::size_t probes_saved = 0;

  nlohmann::json to_json() const;
  static CrawlStats from_json(const nlohmann::json& doc);
};

// `listed_edges` are the (child, superconcept) pairs produced by listing;
// every other direct edge of the hierarchy counts as found by insertion.
CrawlStats compute_stats(const ConceptHierarchy& h, const LedgerSnapshot& ledger,
                         std::size_t n_rejected, const std::set<DirectEdge>& listed_edges,
                         std::optional<int> exploration_depth, int ft);
CrawlStats compute_stats(const CrawlConfig& config, const CrawlState& state);

// Overview table, one row per crawl: seed, co_d, ft, n_C, n_D, n_sub,
// n_sub', p/C, cost, <= co_d, > co_d.
std::string render_summary(const std::vector<CrawlStats>& rows);
// Concepts per depth 1..9 (deeper ones are folded into 9).
std::string render_depth_table(const CrawlStats& s);
// Concepts per outdegree 0..9, 10+, then max and average.
std::string render_outdegree_table(const CrawlStats& s);
// All three tables.
std::string render_stats(const CrawlStats& s);

}  // namespace ontocrawl
