#include "ontocrawl/llm_oracle.hpp"

#include <set>

#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"
#include "ontocrawl/parallel.hpp"
#include "ontocrawl/parsing.hpp"

namespace ontocrawl {

namespace {

std::vector<std::string> union_by_name(const std::vector<std::vector<std::string>>& lists) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& list : lists) {
    for (const auto& n : list) {
      if (seen.insert(normalize_name(n)).second) out.push_back(n);
    }
  }
  return out;
}

}  // namespace

LlmOracle::LlmOracle(std::shared_ptr<ChatTransport> transport, LlmOracleOptions options,
                     std::shared_ptr<ResponseCache> cache)
    : Oracle(options.prices),
      options_(std::move(options)),
      client_(std::move(transport), options_.client, ledger(), query_log(),
              std::move(cache)) {
  options_.params.validate();
  options_.sampling.validate();
}

std::string LlmOracle::ask(QueryKind kind, const Bindings& bindings,
                           const OracleContext& ctx, bool bypass_cache) {
  const auto prompt = render(kind, bindings, ctx);
  return client_.complete(kind, prompt, options_.params, ctx.phase, bypass_cache).text;
}

template <class Parse>
auto LlmOracle::ask_parsed(QueryKind kind, const Bindings& bindings,
                           const OracleContext& ctx, Parse parse) {
  try {
    return parse(ask(kind, bindings, ctx));
  } catch (const ParseError& e) {
    spdlog::warn("{}: {}; asking once more", to_string(kind), e.what());
  }
  return parse(ask(kind, bindings, ctx, true));
}

bool LlmOracle::has_subconcepts(const OracleContext& ctx, const std::string& c) {
  return ask_parsed(QueryKind::existence, {{"C", c}}, ctx,
                    [](const std::string& r) { return parse_yes_no(r); });
}

std::vector<std::string> LlmOracle::list_subconcepts(const OracleContext& ctx,
                                                     const std::string& c, int ft,
                                                     int n_samples) {
  return list_with_frequency(ctx, c, ft, n_samples);
}

std::vector<std::string> LlmOracle::list_with_frequency(const OracleContext& ctx,
                                                        const std::string& c, int ft,
                                                        int n_samples) {
  const auto prompt = render(QueryKind::listing, {{"C", c}}, ctx);
  const auto frequencies =
      client_.sample_first_tokens(QueryKind::listing, prompt, n_samples, options_.sampling);
  const auto tokens = select_tokens(frequencies, ft);
  if (tokens.empty()) {
    spdlog::info("no first token of the listing for {} reached {}; plain listing", c, ft);
    return parse_csv_list(ask(QueryKind::listing, {{"C", c}}, ctx));
  }
  auto lists = parallel_map(tokens, client_.max_in_flight(), [&](const std::string& t) {
    return parse_csv_list(ask(QueryKind::listing_continuation, {{"C", c}, {"t", t}}, ctx));
  });
  return union_by_name(lists);
}

std::map<std::string, std::string> LlmOracle::describe(const OracleContext& ctx,
                                                       const std::string& c,
                                                       const std::vector<std::string>& names) {
  if (names.empty()) return {};
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  const auto reply = ask(QueryKind::description, {{"C", c}, {"list", list}}, ctx);
  auto parsed = parse_descriptions(reply, names);
  for (const auto& m : parsed.missing) {
    spdlog::warn("no description returned for {} (under {})", m, c);
  }
  return std::move(parsed.by_name);
}

bool LlmOracle::is_instance(const OracleContext& ctx, const std::string& d) {
  return ask_parsed(QueryKind::verify_instance, {{"D", d}}, ctx, [](const std::string& r) {
    return parse_choice(r, {"instance", "subcategory"}) == 0;
  });
}

bool LlmOracle::is_part(const OracleContext& ctx, const std::string& d) {
  return ask_parsed(QueryKind::verify_part, {{"D", d}}, ctx, [](const std::string& r) {
    return parse_choice(r, {"part", "subcategory"}) == 0;
  });
}

bool LlmOracle::under_seed(const OracleContext& ctx, const std::string& d) {
  return ask_parsed(QueryKind::verify_seed, {{"D", d}}, ctx,
                    [](const std::string& r) { return parse_yes_no(r); });
}

bool LlmOracle::is_subcategory_of(const OracleContext& ctx, const std::string& d,
                                  const std::string& c) {
  return ask_parsed(QueryKind::verify_subcat, {{"C", c}, {"D", d}}, ctx,
                    [](const std::string& r) { return parse_yes_no(r); });
}

std::optional<std::string> LlmOracle::rename_from_description(const OracleContext& ctx,
                                                              const std::string& c,
                                                              const std::string& description) {
  auto reply = ask(QueryKind::rename, {{"C", c}, {"desc", description}}, ctx);
  auto lines = parse_csv_list(reply.substr(0, reply.find('\n')));
  if (lines.empty()) return std::nullopt;
  return lines.front();
}

bool LlmOracle::interchangeable(const OracleContext& ctx, const std::string& d1,
                                const std::string& d2) {
  return ask_parsed(QueryKind::synonym_interchangeable, {{"D1", d1}, {"D2", d2}}, ctx,
                    [](const std::string& r) { return parse_yes_no(r); });
}

std::pair<std::string, std::string> LlmOracle::subcategory_direction(
    const OracleContext& ctx, const std::string& d1, const std::string& d2) {
  return ask_parsed(QueryKind::synonym_direction, {{"D1", d1}, {"D2", d2}}, ctx,
                    [](const std::string& r) { return parse_direction(r); });
}

}  // namespace ontocrawl
