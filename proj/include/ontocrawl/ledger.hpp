#pragma once

#include <cstdint>
#include <mutex>

#include <nlohmann/json_fwd.hpp>

namespace ontocrawl {

// Dollar price per single token.
struct PriceTable {
  double prompt_per_token = 0.0015 / 1000.0;
  double completion_per_token = 0.002 / 1000.0;
};

struct LedgerSnapshot {
  std::uint64_t requests = 0;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double dollars = 0.0;

  nlohmann::json to_json() const;
  static LedgerSnapshot from_json(const nlohmann::json& doc);
};

// Request and token accounting. Dollars are always derived from the token
// counters and the price table, never accumulated separately.
class CostLedger {
 public:
  explicit CostLedger(PriceTable prices = {}) : prices_(prices) {}

  void record(std::uint64_t prompt_tokens, std::uint64_t completion_tokens);

  LedgerSnapshot snapshot() const;

  // Replaces the counters, e.g. when resuming from a checkpoint.
  void restore(const LedgerSnapshot& snapshot);

  const PriceTable& prices() const noexcept { return prices_; }

 private:
  mutable std::mutex mutex_;
  PriceTable prices_;
  std::uint64_t requests_ = 0;
  std::uint64_t prompt_tokens_ = 0;
  std::uint64_t completion_tokens_ = 0;
};

}  // namespace ontocrawl
