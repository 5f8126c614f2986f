#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ontocrawl/ledger.hpp"
#include "ontocrawl/oracle.hpp"
#include "ontocrawl/query_log.hpp"

namespace ontocrawl {

struct CompletionParams {
  double temperature = 0.0;
  double top_p = 0.99;
  int max_tokens = 512;
  std::string model = "gpt-3.5-turbo";

  // Throws ConfigError when a value is out of range.
  void validate() const;

  nlohmann::json to_json() const;
  // Fields missing from `doc` keep the values of `base`.
  static CompletionParams from_json(const nlohmann::json& doc,
                                    const CompletionParams& base);
  static CompletionParams from_json(const nlohmann::json& doc);
};

// Defaults for the first-token sampling phase of listing.
CompletionParams default_sampling_params();

struct ChatRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 1;

  // Body of a chat-completion request with a single user message.
  nlohmann::json to_json() const;
};

struct ChatResponse {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

// One round trip to a chat-completion endpoint. Throws TransportError.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_retries = 5;
  std::chrono::milliseconds initial_delay{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_delay{30'000};

  std::chrono::milliseconds delay_before_retry(int retry) const;
};

// Replies of deterministic (temperature 0) requests, keyed by a content hash
// of prompt and parameters.
class ResponseCache {
 public:
  static std::string key(const std::string& prompt, const CompletionParams& params);

  std::optional<ChatResponse> lookup(const std::string& key) const;
  void store(const std::string& key, const ChatResponse& response);
  std::size_t size() const;

  // Missing files load as an empty cache. Throws CheckpointError on a
  // corrupt file.
  void load(const std::filesystem::path& path);
  // Written atomically (temp file, then rename).
  void save(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, ChatResponse> entries_;
};

struct LlmClientOptions {
  RetryPolicy retry;
  std::size_t max_in_flight = 8;
};

struct Completion {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  bool cached = false;
  int attempts = 0;
};

// Chat-completion client with caching, bounded concurrency, retries and
// accounting. Ledger and log belong to the caller.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<ChatTransport> transport, LlmClientOptions options,
            CostLedger& ledger, QueryLog& log,
            std::shared_ptr<ResponseCache> cache = std::make_shared<ResponseCache>());

  // Temperature-0 requests are answered from the cache when possible unless
  // `bypass_cache` is set. Throws TransportError once retries are exhausted.
  Completion complete(QueryKind kind, const std::string& prompt,
                      const CompletionParams& params, const std::string& phase = {},
                      bool bypass_cache = false);

  // Poses `prompt` n_samples times with max_tokens = 1 and counts the trimmed
  // first tokens. Samples that keep failing are dropped.
  std::map<std::string, int> sample_first_tokens(QueryKind kind,
                                                 const std::string& prompt,
                                                 int n_samples,
                                                 const CompletionParams& sampling);

  ResponseCache& cache() noexcept { return *cache_; }
  std::size_t dropped_samples() const noexcept { return dropped_samples_.load(); }
  std::size_t max_in_flight() const noexcept { return options_.max_in_flight; }

 private:
  std::shared_ptr<ChatTransport> transport_;
  LlmClientOptions options_;
  CostLedger& ledger_;
  QueryLog& log_;
  std::shared_ptr<ResponseCache> cache_;
  std::counting_semaphore<> in_flight_;
  std::atomic<std::size_t> dropped_samples_{0};
};

}  // namespace ontocrawl
