#include "ontocrawl/llm_client.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>
#include <vector>

#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/hashing.hpp"
#include "ontocrawl/names.hpp"
#include "ontocrawl/parallel.hpp"

namespace ontocrawl {

void CompletionParams::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw ConfigError("temperature must lie in [0, 2]");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must lie in (0, 1]");
  if (max_tokens < 1) throw ConfigError("max_tokens must be positive");
  if (model.empty()) throw ConfigError("model must not be empty");
}

nlohmann::json CompletionParams::to_json() const {
  return {{"model", model},
          {"temperature", temperature},
          {"top_p", top_p},
          {"max_tokens", max_tokens}};
}

CompletionParams CompletionParams::from_json(const nlohmann::json& doc) {
  return from_json(doc, CompletionParams{});
}

CompletionParams CompletionParams::from_json(const nlohmann::json& doc,
                                             const CompletionParams& base) {
  CompletionParams p = base;
  p.model = doc.value("model", p.model);
  p.temperature = doc.value("temperature", p.temperature);
  p.top_p = doc.value("top_p", p.top_p);
  p.max_tokens = doc.value("max_tokens", p.max_tokens);
  return p;
}

CompletionParams default_sampling_params() {
  CompletionParams p;
  p.temperature = 2.0;
  p.top_p = 0.99;
  p.max_tokens = 1;
  return p;
}

nlohmann::json ChatRequest::to_json() const {
  return {{"model", model},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
          {"temperature", temperature},
          {"top_p", top_p},
          {"max_tokens", max_tokens}};
}

std::chrono::milliseconds RetryPolicy::delay_before_retry(int retry) const {
  const double base = static_cast<double>(initial_delay.count());
  const double d = base * std::pow(backoff_factor, std::max(0, retry - 1));
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(std::min(d, static_cast<double>(max_delay.count()))));
}

// ---------------------------------------------------------------------------
// ResponseCache

std::string ResponseCache::key(const std::string& prompt, const CompletionParams& params) {
  Fnv1a64 h;
  h.field(prompt).field(params.to_json().dump());
  return h.hex();
}

std::optional<ChatResponse> ResponseCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::store(const std::string& key, const ChatResponse& response) {
  std::lock_guard lock(mutex_);
  entries_[key] = response;
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void ResponseCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return;
  try {
    nlohmann::json doc;
    in >> doc;
    if (doc.value("version", 0) != 1) throw CheckpointError("unsupported cache version");
    std::map<std::string, ChatResponse> loaded;
    for (const auto& [k, v] : doc.at("entries").items()) {
      loaded[k] = ChatResponse{v.at("text").get<std::string>(),
                               v.at("prompt_tokens").get<std::uint64_t>(),
                               v.at("completion_tokens").get<std::uint64_t>()};
    }
    std::lock_guard lock(mutex_);
    entries_.merge(loaded);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("corrupt response cache " + path.string() + ": " + e.what());
  }
}

void ResponseCache::save(const std::filesystem::path& path) const {
  nlohmann::json entries = nlohmann::json::object();
  {
    std::lock_guard lock(mutex_);
    for (const auto& [k, v] : entries_) {
      entries[k] = {{"text", v.text},
                    {"prompt_tokens", v.prompt_tokens},
                    {"completion_tokens", v.completion_tokens}};
    }
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out << nlohmann::json{{"version", 1}, {"entries", std::move(entries)}}.dump();
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// LlmClient

LlmClient::LlmClient(std::shared_ptr<ChatTransport> transport, LlmClientOptions options,
                     CostLedger& ledger, QueryLog& log,
                     std::shared_ptr<ResponseCache> cache)
    : transport_(std::move(transport)),
      options_(options),
      ledger_(ledger),
      log_(log),
      cache_(std::move(cache)),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, options.max_in_flight))) {
  if (!transport_) throw InvalidInputError("LlmClient needs a transport");
  if (!cache_) cache_ = std::make_shared<ResponseCache>();
}

Completion LlmClient::complete(QueryKind kind, const std::string& prompt,
                               const CompletionParams& params, const std::string& phase,
                               bool bypass_cache) {
  params.validate();
  QueryRecord record;
  record.template_name = std::string(to_string(kind));
  record.prompt = prompt;
  record.params = params.to_json();
  record.phase = phase;

  const bool deterministic = params.temperature == 0.0;
  const auto key = deterministic ? ResponseCache::key(prompt, params) : std::string{};
  if (deterministic && !bypass_cache) {
    if (auto hit = cache_->lookup(key)) {
      record.reply = hit->text;
      record.prompt_tokens = hit->prompt_tokens;
      record.completion_tokens = hit->completion_tokens;
      record.cached = true;
      record.attempts = 0;
      log_.append(record);
      return Completion{hit->text, hit->prompt_tokens, hit->completion_tokens, true, 0};
    }
  }

  const ChatRequest request{params.model, prompt, params.temperature, params.top_p,
                            params.max_tokens};
  for (int attempt = 1;; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    try {
      in_flight_.acquire();
      ChatResponse response;
      try {
        response = transport_->send(request);
      } catch (...) {
        in_flight_.release();
        throw;
      }
      in_flight_.release();

      ledger_.record(response.prompt_tokens, response.completion_tokens);
      if (deterministic) cache_->store(key, response);
      record.reply = response.text;
      record.prompt_tokens = response.prompt_tokens;
      record.completion_tokens = response.completion_tokens;
      record.latency_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();
      record.attempts = attempt;
      log_.append(record);
      return Completion{response.text, response.prompt_tokens,
                        response.completion_tokens, false, attempt};
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt > options_.retry.max_retries) {
        record.attempts = attempt;
        record.error = e.what();
        log_.append(record);
        throw;
      }
      const auto delay = options_.retry.delay_before_retry(attempt);
      spdlog::warn("{} request failed (attempt {}): {}; retrying in {} ms",
                   record.template_name, attempt, e.what(), delay.count());
      std::this_thread::sleep_for(delay);
    }
  }
}

std::map<std::string, int> LlmClient::sample_first_tokens(QueryKind kind,
                                                          const std::string& prompt,
                                                          int n_samples,
                                                          const CompletionParams& sampling) {
  if (n_samples < 1) throw InvalidInputError("n_samples must be at least 1");
  CompletionParams p = sampling;
  p.max_tokens = 1;
  std::vector<int> draws(static_cast<std::size_t>(n_samples));
  auto tokens = parallel_map(draws, options_.max_in_flight,
                             [&](int) -> std::optional<std::string> {
                               try {
                                 return trim(complete(kind, prompt, p, "sampling", true).text);
                               } catch (const TransportError&) {
                                 ++dropped_samples_;
                                 return std::nullopt;
                               }
                             });
  std::map<std::string, int> freq;
  std::size_t dropped = 0;
  for (const auto& t : tokens) {
    if (!t) {
      ++dropped;
    } else if (!t->empty()) {
      ++freq[*t];
    }
  }
  if (dropped > 0) {
    spdlog::warn("first-token sampling: {} of {} samples dropped after retries", dropped,
                 n_samples);
  }
  return freq;
}

}  // namespace ontocrawl
