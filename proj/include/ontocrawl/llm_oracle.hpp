#pragma once

#include <memory>

#include "ontocrawl/llm_client.hpp"
#include "ontocrawl/oracle.hpp"
#include "ontocrawl/prompts.hpp"

namespace ontocrawl {

struct LlmOracleOptions {
  // Used for every prompt except first-token sampling.
  CompletionParams params;
  CompletionParams sampling = default_sampling_params();
  LlmClientOptions client;
  PriceTable prices;
};

// The oracle contract answered by a chat model: renders the prompt for each
// question, sends it as an independent single-message conversation and
// parses the reply. An unparseable reply is re-asked once, bypassing the
// cache, before a ParseError escapes.
class LlmOracle final : public Oracle {
 public:
  explicit LlmOracle(std::shared_ptr<ChatTransport> transport, LlmOracleOptions options = {},
                     std::shared_ptr<ResponseCache> cache = std::make_shared<ResponseCache>());

  bool has_subconcepts(const OracleContext& ctx, const std::string& c) override;
  std::vector<std::string> list_subconcepts(const OracleContext& ctx, const std::string& c,
                                            int ft, int n_samples) override;
  std::map<std::string, std::string> describe(const OracleContext& ctx,
                                              const std::string& c,
                                              const std::vector<std::string>& names) override;
  bool is_instance(const OracleContext& ctx, const std::string& d) override;
  bool is_part(const OracleContext& ctx, const std::string& d) override;
  bool under_seed(const OracleContext& ctx, const std::string& d) override;
  bool is_subcategory_of(const OracleContext& ctx, const std::string& d,
                         const std::string& c) override;
  std::optional<std::string> rename_from_description(const OracleContext& ctx,
                                                     const std::string& c,
                                                     const std::string& description) override;
  bool interchangeable(const OracleContext& ctx, const std::string& d1,
                       const std::string& d2) override;
  std::pair<std::string, std::string> subcategory_direction(const OracleContext& ctx,
                                                            const std::string& d1,
                                                            const std::string& d2) override;

  // Frequency-sampled listing: sample first tokens of the listing prompt,
  // re-ask the listing once per token reaching `ft` with the answer forced
  // to start with that token, and return the union of the parsed lists.
  // When no token reaches `ft` a single plain listing is used instead.
  std::vector<std::string> list_with_frequency(const OracleContext& ctx,
                                               const std::string& c, int ft,
                                               int n_samples);

  LlmClient& client() noexcept { return client_; }
  const LlmOracleOptions& options() const noexcept { return options_; }

 private:
  std::string ask(QueryKind kind, const Bindings& bindings, const OracleContext& ctx,
                  bool bypass_cache = false);

  template <class Parse>
  auto ask_parsed(QueryKind kind, const Bindings& bindings, const OracleContext& ctx,
                  Parse parse);

  LlmOracleOptions options_;
  LlmClient client_;
};

}  // namespace ontocrawl
