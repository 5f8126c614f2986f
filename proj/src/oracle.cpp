#include "ontocrawl/oracle.hpp"

#include "ontocrawl/names.hpp"

namespace ontocrawl {

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::existence: return "existence";
    case QueryKind::listing: return "listing";
    case QueryKind::listing_continuation: return "listing_continuation";
    case QueryKind::description: return "description";
    case QueryKind::verify_instance: return "verify_instance";
    case QueryKind::verify_part: return "verify_part";
    case QueryKind::verify_seed: return "verify_seed";
    case QueryKind::verify_subcat: return "verify_subcat";
    case QueryKind::rename: return "rename";
    case QueryKind::synonym_interchangeable: return "synonym_interchangeable";
    case QueryKind::synonym_direction: return "synonym_direction";
  }
  return "unknown";
}

void OracleContext::add_description(std::string_view name, std::string text) {
  descriptions[normalize_name(name)] = std::move(text);
}

const std::string* OracleContext::description_for(std::string_view name) const {
  auto it = descriptions.find(normalize_name(name));
  return it == descriptions.end() ? nullptr : &it->second;
}

}  // namespace ontocrawl
