#include "ontocrawl/ledger.hpp"

#include <nlohmann/json.hpp>

namespace ontocrawl {

nlohmann::json LedgerSnapshot::to_json() const {
  return {{"requests", requests},
          {"prompt_tokens", prompt_tokens},
          {"completion_tokens", completion_tokens},
          {"dollars", dollars}};
}

LedgerSnapshot LedgerSnapshot::from_json(const nlohmann::json& doc) {
  LedgerSnapshot s;
  s.requests = doc.at("requests").get<std::uint64_t>();
  s.prompt_tokens = doc.at("prompt_tokens").get<std::uint64_t>();
  s.completion_tokens = doc.at("completion_tokens").get<std::uint64_t>();
  s.dollars = doc.value("dollars", 0.0);
  return s;
}

void CostLedger::record(std::uint64_t prompt_tokens,
                        std::uint64_t completion_tokens) {
  std::lock_guard lock(mutex_);
  ++requests_;
  prompt_tokens_ += prompt_tokens;
  completion_tokens_ += completion_tokens;
}

LedgerSnapshot CostLedger::snapshot() const {
  std::lock_guard lock(mutex_);
  LedgerSnapshot s;
  s.requests = requests_;
  s.prompt_tokens = prompt_tokens_;
  s.completion_tokens = completion_tokens_;
  s.dollars = static_cast<double>(prompt_tokens_) * prices_.prompt_per_token +
              static_cast<double>(completion_tokens_) * prices_.completion_per_token;
  return s;
}

void CostLedger::restore(const LedgerSnapshot& snapshot) {
  std::lock_guard lock(mutex_);
  requests_ = snapshot.requests;
  prompt_tokens_ = snapshot.prompt_tokens;
  completion_tokens_ = snapshot.completion_tokens;
}

}  // namespace ontocrawl
