#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontocrawl/ledger.hpp"
#include "ontocrawl/query_log.hpp"

namespace ontocrawl {

// The kinds of question a knowledge source answers. Each one corresponds to
// exactly one prompt template of the chat-completion backend.
enum class QueryKind {
  existence,
  listing,
  listing_continuation,
  description,
  verify_instance,
  verify_part,
  verify_seed,
  verify_subcat,
  rename,
  synonym_interchangeable,
  synonym_direction,
};

inline constexpr QueryKind kAllQueryKinds[] = {
    QueryKind::existence,          QueryKind::listing,
    QueryKind::listing_continuation, QueryKind::description,
    QueryKind::verify_instance,    QueryKind::verify_part,
    QueryKind::verify_seed,        QueryKind::verify_subcat,
    QueryKind::rename,             QueryKind::synonym_interchangeable,
    QueryKind::synonym_direction,
};

std::string_view to_string(QueryKind kind);

// Context attached to every question.
struct OracleContext {
  std::string seed_name;
  // Superconcept from which the concept under discussion was first found.
  std::optional<std::string> parent_name;
  // Concept descriptions, keyed by normalized name.
  std::map<std::string, std::string> descriptions;
  // Free-form tag copied into the query log (e.g. "top", "bottom").
  std::string phase;

  void add_description(std::string_view name, std::string text);
  const std::string* description_for(std::string_view name) const;
};

// The contract shared by every knowledge source. Answers are structured; how
// a backend obtains them (prompting, table lookup) is its own business.
//
// Implementations must accept concurrent calls.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual bool has_subconcepts(const OracleContext& ctx, const std::string& c) = 0;

  // `ft` is the frequency threshold out of `n_samples` first-token samples;
  // backends without sampling ignore both.
  virtual std::vector<std::string> list_subconcepts(const OracleContext& ctx,
                                                    const std::string& c, int ft,
                                                    int n_samples) = 0;

  // Descriptions of `names`, each considered as a subconcept of `c`. Every
  // input name is a key of the result; an empty value marks a missing one.
  virtual std::map<std::string, std::string> describe(
      const OracleContext& ctx, const std::string& c,
      const std::vector<std::string>& names) = 0;

  virtual bool is_instance(const OracleContext& ctx, const std::string& d) = 0;
  virtual bool is_part(const OracleContext& ctx, const std::string& d) = 0;
  virtual bool under_seed(const OracleContext& ctx, const std::string& d) = 0;
  virtual bool is_subcategory_of(const OracleContext& ctx, const std::string& d,
                                 const std::string& c) = 0;

  virtual std::optional<std::string> rename_from_description(
      const OracleContext& ctx, const std::string& c,
      const std::string& description) = 0;

  virtual bool interchangeable(const OracleContext& ctx, const std::string& d1,
                               const std::string& d2) = 0;

  // Returns (sub, super).
  virtual std::pair<std::string, std::string> subcategory_direction(
      const OracleContext& ctx, const std::string& d1, const std::string& d2) = 0;

  QueryLog& query_log() noexcept { return query_log_; }
  const QueryLog& query_log() const noexcept { return query_log_; }
  CostLedger& ledger() noexcept { return ledger_; }
  const CostLedger& ledger() const noexcept { return ledger_; }

 protected:
  explicit Oracle(PriceTable prices = {}) : ledger_(prices) {}

 private:
  QueryLog query_log_;
  CostLedger ledger_;
};

}  // namespace ontocrawl
