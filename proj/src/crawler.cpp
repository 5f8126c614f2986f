#include "ontocrawl/crawler.hpp"

#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/hashing.hpp"
#include "ontocrawl/names.hpp"
#include "ontocrawl/parallel.hpp"
#include "ontocrawl/verification.hpp"

namespace ontocrawl {

// ---------------------------------------------------------------------------
// CrawlConfig

void CrawlConfig::validate() const {
  if (is_blank(seed_name)) throw ConfigError("seed_name must not be empty");
  if (exploration_depth && *exploration_depth < 1) {
    throw ConfigError("exploration_depth must be at least 1 or none");
  }
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (ft < 1 || ft > n_samples) throw ConfigError("ft must lie in [1, n_samples]");
  if (max_concepts && *max_concepts < 1) throw ConfigError("max_concepts must be positive");
  if (oracle != "llm" && !(uses_mock() && !mock_path().empty())) {
    throw ConfigError("oracle must be llm or mock:<path>");
  }
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be positive");
  if (max_retries < 0) throw ConfigError("max_retries must not be negative");
  params.validate();
  sampling.validate();
  try {
    noise.validate();
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json CrawlConfig::to_json() const {
  return {
      {"seed_name", seed_name},
      {"exploration_depth",
       exploration_depth ? nlohmann::json(*exploration_depth) : nlohmann::json("none")},
      {"ft", ft},
      {"n_samples", n_samples},
      {"max_concepts", max_concepts ? nlohmann::json(*max_concepts) : nlohmann::json(nullptr)},
      {"oracle", oracle},
      {"params", params.to_json()},
      {"sampling", sampling.to_json()},
      {"noise", noise.to_json()},
      {"base_iri", base_iri},
      {"api_base_url", api_base_url},
      {"max_in_flight", max_in_flight},
      {"max_retries", max_retries},
  };
}

CrawlConfig CrawlConfig::from_json(const nlohmann::json& doc) {
  return from_json(doc, CrawlConfig{});
}

CrawlConfig CrawlConfig::from_json(const nlohmann::json& doc, const CrawlConfig& base) {
  if (!doc.is_object()) throw ConfigError("configuration must be an object");
  CrawlConfig c = base;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed_name") {
        c.seed_name = value.get<std::string>();
      } else if (key == "exploration_depth") {
        if (value.is_null() || (value.is_string() && value.get<std::string>() == "none")) {
          c.exploration_depth.reset();
        } else if (value.is_number_integer()) {
          c.exploration_depth = value.get<int>();
        } else {
          throw ConfigError("exploration_depth must be an integer or \"none\"");
        }
      } else if (key == "ft") {
        c.ft = value.get<int>();
      } else if (key == "n_samples") {
        c.n_samples = value.get<int>();
      } else if (key == "max_concepts") {
        if (value.is_null()) {
          c.max_concepts.reset();
        } else {
          c.max_concepts = value.get<std::size_t>();
        }
      } else if (key == "oracle") {
        c.oracle = value.get<std::string>();
      } else if (key == "params") {
        c.params = CompletionParams::from_json(value, c.params);
      } else if (key == "sampling") {
        c.sampling = CompletionParams::from_json(value, c.sampling);
      } else if (key == "noise") {
        auto merged = c.noise.to_json();
        merged.update(value);
        c.noise = NoiseModel::from_json(merged);
      } else if (key == "base_iri") {
        c.base_iri = value.get<std::string>();
      } else if (key == "api_base_url") {
        c.api_base_url = value.get<std::string>();
      } else if (key == "max_in_flight") {
        c.max_in_flight = value.get<std::size_t>();
      } else if (key == "max_retries") {
        c.max_retries = value.get<int>();
      } else {
        throw ConfigError("unknown configuration key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ill-typed configuration value: ") + e.what());
  } catch (const InvalidInputError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

std::string checksum_of(const nlohmann::json& body) {
  Fnv1a64 h;
  h.update(body.dump());
  return h.hex();
}

nlohmann::json edges_json(const std::set<DirectEdge>& edges) {
  auto out = nlohmann::json::array();
  for (auto [c, p] : edges) out.push_back({c.value, p.value});
  return out;
}

}  // namespace

nlohmann::json checkpoint_to_json(const CrawlConfig& config, const CrawlState& state) {
  auto frontier = nlohmann::json::array();
  for (auto id : state.hierarchy.ids()) {
    const auto& c = state.hierarchy.concept_at(id);
    if (!c.explored) frontier.push_back(id.value);
  }
  auto discovered = nlohmann::json::array();
  for (auto [c, p] : state.discovered_under) discovered.push_back({c.value, p.value});
  nlohmann::json body{
      {"config", config.to_json()},
      {"hierarchy", state.hierarchy.to_json()},
      {"explorations", state.explorations},
      {"frontier", std::move(frontier)},
      {"discovered_under", std::move(discovered)},
      {"listed_edges", edges_json(state.listed_edges)},
      {"n_rejected", state.n_rejected},
      {"probes_issued", state.probes_issued},
      {"probes_saved", state.probes_saved},
      {"ledger", state.ledger.to_json()},
  };
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"checksum", checksum_of(body)},
          {"body", std::move(body)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat) {
      throw CheckpointError("not a checkpoint file");
    }
    const auto version = doc.value("version", 0);
    if (version != kCheckpointVersion) {
      throw CheckpointError("checkpoint version " + std::to_string(version) +
                            " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
    }
    const auto& body = doc.at("body");
    if (doc.value("checksum", "") != checksum_of(body)) {
      throw CheckpointError("checkpoint checksum mismatch");
    }
    Checkpoint cp;
    cp.config = CrawlConfig::from_json(body.at("config"));
    cp.config.validate();
    cp.state.hierarchy = ConceptHierarchy::from_json(body.at("hierarchy"));
    cp.state.explorations = body.at("explorations").get<std::size_t>();
    auto id_at = [&](const nlohmann::json& v) {
      const ConceptId id{v.get<std::uint32_t>()};
      if (!cp.state.hierarchy.contains(id)) throw CheckpointError("unknown concept id");
      return id;
    };
    for (const auto& e : body.at("discovered_under")) {
      cp.state.discovered_under[id_at(e.at(0))] = id_at(e.at(1));
    }
    for (const auto& e : body.at("listed_edges")) {
      cp.state.listed_edges.emplace(id_at(e.at(0)), id_at(e.at(1)));
    }
    cp.state.n_rejected = body.at("n_rejected").get<std::size_t>();
    cp.state.probes_issued = body.at("probes_issued").get<std::size_t>();
    cp.state.probes_saved = body.at("probes_saved").get<std::size_t>();
    cp.state.ledger = LedgerSnapshot::from_json(body.at("ledger"));
    return cp;
  } catch (const CheckpointError&) {
    throw;
  } catch (const Error& e) {
    throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
  }
}

void write_checkpoint(const std::filesystem::path& path, const CrawlConfig& config,
                      const CrawlState& state) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out << checkpoint_to_json(config, state).dump(1) << '\n';
    if (!out) throw CheckpointError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

// ---------------------------------------------------------------------------
// Crawler

Crawler::Crawler(CrawlConfig config, Oracle& oracle)
    : config_(std::move(config)), oracle_(oracle) {
  config_.validate();
  state_.hierarchy = ConceptHierarchy(config_.seed_name);
  state_.ledger = oracle_.ledger().snapshot();
}

Crawler::Crawler(CrawlConfig config, Oracle& oracle, CrawlState state)
    : config_(std::move(config)), oracle_(oracle), state_(std::move(state)) {
  config_.validate();
  oracle_.ledger().restore(state_.ledger);
}

bool Crawler::capped() const {
  return config_.max_concepts && state_.hierarchy.size() >= *config_.max_concepts;
}

bool Crawler::finished() const {
  if (capped()) return true;
  std::optional<std::size_t> limit;
  if (config_.exploration_depth) limit = static_cast<std::size_t>(*config_.exploration_depth);
  return !state_.hierarchy.next_unexplored(limit);
}

void Crawler::save() {
  state_.ledger = oracle_.ledger().snapshot();
  if (checkpoint_path_) write_checkpoint(*checkpoint_path_, config_, state_);
  if (after_checkpoint_) after_checkpoint_();
}

bool Crawler::run(std::optional<std::size_t> max_explorations) {
  std::optional<std::size_t> limit;
  if (config_.exploration_depth) limit = static_cast<std::size_t>(*config_.exploration_depth);
  save();
  std::size_t done = 0;
  while (!capped()) {
    if (max_explorations && done >= *max_explorations) return finished();
    const auto next = state_.hierarchy.next_unexplored(limit);
    if (!next) break;
    explore(*next);
    ++done;
    save();
  }
  return true;
}

OracleContext Crawler::context_for(ConceptId c) const {
  const auto& h = state_.hierarchy;
  OracleContext ctx;
  ctx.seed_name = h.name_of(h.seed());
  auto describe = [&](ConceptId id) {
    const auto& k = h.concept_at(id);
    if (k.description) ctx.add_description(k.canonical_name, *k.description);
  };
  describe(h.seed());
  describe(c);
  if (auto it = state_.discovered_under.find(c); it != state_.discovered_under.end()) {
    ctx.parent_name = h.name_of(it->second);
    describe(it->second);
  }
  return ctx;
}

void Crawler::add_listed(ConceptId child, ConceptId parent) {
  if (child != parent) state_.listed_edges.emplace(child, parent);
}

void Crawler::remap(ConceptId from, ConceptId to) {
  std::set<DirectEdge> edges;
  for (auto [c, p] : state_.listed_edges) {
    if (c == from) c = to;
    if (p == from) p = to;
    if (c != p) edges.emplace(c, p);
  }
  state_.listed_edges = std::move(edges);
  std::map<ConceptId, ConceptId> under;
  for (const auto& [child, parent] : state_.discovered_under) {
    ConceptId c = child;
    ConceptId p = parent;
    if (c == from) c = to;
    if (p == from) p = to;
    if (c != p && !under.contains(c)) under[c] = p;
  }
  state_.discovered_under = std::move(under);
}

void Crawler::explore(ConceptId c) {
  auto& h = state_.hierarchy;
  const std::string name = h.name_of(c);
  OracleContext ctx = context_for(c);
  ctx.phase = "explore";
  spdlog::info("exploring {} (depth {})", name, h.depth_of(c));

  bool has_sub = false;
  try {
    has_sub = oracle_.has_subconcepts(ctx, name);
  } catch (const ParseError& e) {
    spdlog::warn("existence answer for {} unreadable, taken as no: {}", name, e.what());
  }
  if (!has_sub) {
    h.mark_explored(c);
    ++state_.explorations;
    return;
  }

  std::vector<std::string> listed;
  try {
    listed = oracle_.list_subconcepts(ctx, name, config_.ft, config_.n_samples);
  } catch (const ParseError& e) {
    spdlog::warn("listing for {} unreadable: {}", name, e.what());
  }
  std::vector<std::string> candidates;
  {
    std::set<std::string> seen{normalize_name(name)};
    for (auto& n : listed) {
      if (is_blank(n)) continue;
      if (seen.insert(normalize_name(n)).second) candidates.push_back(trim(n));
    }
  }

  std::vector<std::string> fresh;
  for (const auto& n : candidates) {
    if (!h.find(n)) fresh.push_back(n);
  }
  std::map<std::string, std::string> descriptions;
  if (!fresh.empty()) {
    try {
      descriptions = oracle_.describe(ctx, name, fresh);
    } catch (const ParseError& e) {
      spdlog::warn("descriptions under {} unreadable: {}", name, e.what());
    }
  }
  auto description_of = [&](const std::string& n) -> std::optional<std::string> {
    auto it = descriptions.find(n);
    if (it == descriptions.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };

  const auto verdicts = parallel_map(fresh, config_.max_in_flight, [&](const std::string& d) {
    OracleContext vctx = ctx;
    vctx.parent_name = name;
    if (auto desc = description_of(d)) vctx.add_description(d, *desc);
    return verify(oracle_, vctx, d, name);
  });
  std::map<std::string, const Verdict*> verdict_of;
  for (std::size_t i = 0; i < fresh.size(); ++i) verdict_of[fresh[i]] = &verdicts[i];

  OracleContext base;
  base.seed_name = h.name_of(h.seed());
  Inserter inserter(oracle_, h, base, InsertionOptions{config_.max_in_flight});

  ConceptId current = c;
  auto known_edge = [&](ConceptId existing) {
    const auto r = inserter.add_known_edge(existing, current);
    if (r.merged_into) {
      remap(*r.merged_away, *r.merged_into);
      if (current == *r.merged_away) current = *r.merged_into;
      return;
    }
    add_listed(existing, current);
  };

  for (const auto& n : candidates) {
    if (capped()) {
      spdlog::info("concept cap {} reached", *config_.max_concepts);
      break;
    }
    if (auto it = verdict_of.find(n); it == verdict_of.end()) {
      if (auto existing = h.find(n)) known_edge(*existing);
      continue;
    }
    const Verdict& v = *verdict_of.at(n);
    if (!v.accepted()) {
      ++state_.n_rejected;
      if (rejections_) rejections_->append(rejection_record(n, name, v));
      continue;
    }
    const auto& final_name = v.final_name(n);
    if (auto existing = h.find(final_name)) {
      known_edge(*existing);
      continue;
    }
    const auto placement = inserter.insert(final_name, description_of(n), current);
    state_.probes_issued += placement.probes_issued;
    state_.probes_saved += placement.probes_saved;
    if (!placement.synonym_of) state_.discovered_under[placement.id] = current;
    add_listed(placement.id, current);
  }

  h.mark_explored(current);
  ++state_.explorations;
}

}  // namespace ontocrawl
