#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ontocrawl/crawler.hpp"
#include "ontocrawl/llm_client.hpp"
#include "ontocrawl/oracle.hpp"

namespace ontocrawl {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitOracle = 3,
  kExitAborted = 4,
  kExitCheckpoint = 5,
};

// Crawl settings given on the command line; unset ones defer to the
// configuration file, then to the defaults.
struct CrawlFlags {
  std::optional<std::string> seed;
  std::optional<std::string> depth;  // integer or "none"
  std::optional<int> ft;
  std::optional<int> samples;
  std::optional<std::string> model;
  std::optional<std::string> oracle;
  std::optional<std::size_t> max_concepts;
  std::optional<std::string> base_iri;
};

// Defaults, overlaid by the JSON file (if any), overlaid by the flags.
// Throws ConfigError; the result is validated.
CrawlConfig compose_config(const std::optional<std::filesystem::path>& config_file,
                           const CrawlFlags& flags);

// Knowledge source selected by `config.oracle`. For the llm backend the API
// key is read from OPENAI_API_KEY and `cache` is used for replies.
std::unique_ptr<Oracle> make_oracle(const CrawlConfig& config,
                                    std::shared_ptr<ResponseCache> cache);

// Names of the files a run leaves in its output directory.
namespace out_files {
inline constexpr const char* kOwl = "hierarchy.owl";
inline constexpr const char* kDot = "hierarchy.dot";
inline constexpr const char* kCheckpoint = "checkpoint.json";
inline constexpr const char* kStatsJson = "stats.json";
inline constexpr const char* kStatsText = "stats.txt";
inline constexpr const char* kQueries = "queries.jsonl";
inline constexpr const char* kRejected = "rejected.jsonl";
inline constexpr const char* kCache = "cache.json";
}  // namespace out_files

// Entry point of the command-line tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace ontocrawl
