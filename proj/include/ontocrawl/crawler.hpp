#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "ontocrawl/hierarchy.hpp"
#include "ontocrawl/insertion.hpp"
#include "ontocrawl/ledger.hpp"
#include "ontocrawl/llm_client.hpp"
#include "ontocrawl/mock_oracle.hpp"
#include "ontocrawl/oracle.hpp"
#include "ontocrawl/query_log.hpp"

namespace ontocrawl {

struct CrawlConfig {
  std::string seed_name;
  // Concepts at this depth or deeper are not explored. Unbounded when empty.
  std::optional<int> exploration_depth;
  int ft = 20;
  int n_samples = 100;
  std::optional<std::size_t> max_concepts;
  // "llm" or "mock:<fixture path>".
  std::string oracle = "llm";
  CompletionParams params;
  CompletionParams sampling = default_sampling_params();
  NoiseModel noise;
  std::string base_iri = "http://example.org/ontocrawl#";
  // Chat-completion endpoint for the llm oracle.
  std::string api_base_url = "https://api.openai.com";
  std::size_t max_in_flight = 8;
  int max_retries = 5;

  // Throws ConfigError.
  void validate() const;

  nlohmann::json to_json() const;
  // Keys missing from `doc` keep the values of `base`. Throws ConfigError
  // on unknown keys or ill-typed values.
  static CrawlConfig from_json(const nlohmann::json& doc, const CrawlConfig& base);
  static CrawlConfig from_json(const nlohmann::json& doc);

  bool uses_mock() const { return oracle.rfind("mock:", 0) == 0; }
  std::string mock_path() const { return uses_mock() ? oracle.substr(5) : std::string(); }
};

struct CrawlState {
  ConceptHierarchy hierarchy{"seed"};
  std::size_t explorations = 0;
  // (child, superconcept) pairs produced by listing, whether or not they
  // survive as direct edges.
  std::set<DirectEdge> listed_edges;
  // Superconcept under which each concept was first listed.
  std::map<ConceptId, ConceptId> discovered_under;
  std::size_t n_rejected = 0;
  std::size_t probes_issued = 0;
  std::size_t probes_saved = 0;
  LedgerSnapshot ledger;
};

inline constexpr const char* kCheckpointFormat = "ontocrawl-checkpoint";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  CrawlConfig config;
  CrawlState state;
};

nlohmann::json checkpoint_to_json(const CrawlConfig& config, const CrawlState& state);
// Throws CheckpointError on a wrong format, version or checksum, or any
// malformed part; nothing is returned in that case.
Checkpoint checkpoint_from_json(const nlohmann::json& doc);
// Written atomically (temp file, then rename).
void write_checkpoint(const std::filesystem::path& path, const CrawlConfig& config,
                      const CrawlState& state);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Builds a concept hierarchy by repeatedly exploring the shallowest
// unexplored concept: ask whether it has subconcepts, list and describe
// them, verify each candidate and insert the survivors.
class Crawler {
 public:
  Crawler(CrawlConfig config, Oracle& oracle);
  // Continues from a saved state; the oracle's ledger is restored from it.
  Crawler(CrawlConfig config, Oracle& oracle, CrawlState state);

  // Explores until the frontier is empty, the concept cap is reached or
  // `max_explorations` more explorations were done. Returns true when the
  // crawl is complete. Transport failures propagate; the checkpoint on disk
  // then holds the state after the last completed exploration.
  bool run(std::optional<std::size_t> max_explorations = std::nullopt);

  bool finished() const;
  const CrawlState& state() const noexcept { return state_; }
  const CrawlConfig& config() const noexcept { return config_; }

  // Checkpoint written at start and after every exploration.
  void set_checkpoint_path(std::filesystem::path path) { checkpoint_path_ = std::move(path); }
  // Receives one record per rejected candidate.
  void set_rejection_log(JsonlLog* log) { rejections_ = log; }
  // Called after every checkpoint, e.g. to persist a response cache.
  void set_after_checkpoint(std::function<void()> fn) { after_checkpoint_ = std::move(fn); }

 private:
  void explore(ConceptId c);
  void save();
  bool capped() const;
  OracleContext context_for(ConceptId c) const;
  void add_listed(ConceptId child, ConceptId parent);
  void remap(ConceptId from, ConceptId to);

  CrawlConfig config_;
  Oracle& oracle_;
  CrawlState state_;
  std::optional<std::filesystem::path> checkpoint_path_;
  JsonlLog* rejections_ = nullptr;
  std::function<void()> after_checkpoint_;
};

}  // namespace ontocrawl
