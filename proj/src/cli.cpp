#include "ontocrawl/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/export.hpp"
#include "ontocrawl/http_transport.hpp"
#include "ontocrawl/llm_oracle.hpp"
#include "ontocrawl/mock_oracle.hpp"
#include "ontocrawl/stats.hpp"

namespace ontocrawl {

namespace fs = std::filesystem;

CrawlConfig compose_config(const std::optional<fs::path>& config_file,
                           const CrawlFlags& flags) {
  CrawlConfig config;
  if (config_file) {
    std::ifstream in(*config_file);
    if (!in) throw ConfigError("cannot read configuration " + config_file->string());
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("configuration is not valid JSON: " + std::string(e.what()));
    }
    config = CrawlConfig::from_json(doc, config);
  }
  if (flags.seed) config.seed_name = *flags.seed;
  if (flags.depth) {
    if (*flags.depth == "none") {
      config.exploration_depth.reset();
    } else {
      try {
        std::size_t used = 0;
        config.exploration_depth = std::stoi(*flags.depth, &used);
        if (used != flags.depth->size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("--depth must be an integer or none");
      }
    }
  }
  if (flags.ft) config.ft = *flags.ft;
  if (flags.samples) config.n_samples = *flags.samples;
  if (flags.model) {
    config.params.model = *flags.model;
    config.sampling.model = *flags.model;
  }
  if (flags.oracle) config.oracle = *flags.oracle;
  if (flags.max_concepts) config.max_concepts = *flags.max_concepts;
  if (flags.base_iri) config.base_iri = *flags.base_iri;
  config.validate();
  return config;
}

std::unique_ptr<Oracle> make_oracle(const CrawlConfig& config,
                                    std::shared_ptr<ResponseCache> cache) {
  if (config.uses_mock()) {
    return std::make_unique<MockOracle>(GroundTruthTaxonomy::load(config.mock_path()),
                                        config.noise);
  }
  HttpTransportOptions transport;
  transport.base_url = config.api_base_url;
  transport.api_key = api_key_from_env();
  LlmOracleOptions options;
  options.params = config.params;
  options.sampling = config.sampling;
  options.client.max_in_flight = config.max_in_flight;
  options.client.retry.max_retries = config.max_retries;
  return std::make_unique<LlmOracle>(std::make_shared<HttpChatTransport>(transport), options,
                                     std::move(cache));
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

void write_outputs(const fs::path& dir, const CrawlConfig& config, const CrawlState& state) {
  write_text(dir / out_files::kOwl, to_owl_rdfxml(state.hierarchy, config.base_iri));
  write_text(dir / out_files::kDot, to_dot(state.hierarchy));
  const auto stats = compute_stats(config, state);
  write_text(dir / out_files::kStatsJson, stats.to_json().dump(2) + "\n");
  write_text(dir / out_files::kStatsText, render_stats(stats));
}

struct RunOptions {
  fs::path out_dir;
  std::optional<std::size_t> max_explorations;
  bool resume = false;
};

int crawl(const CrawlConfig& config, std::optional<CrawlState> state, const RunOptions& opts) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << opts.out_dir << ": " << ec.message() << "\n";
    return kExitConfig;
  }
  auto cache = std::make_shared<ResponseCache>();
  const auto cache_path = opts.out_dir / out_files::kCache;
  std::unique_ptr<Oracle> oracle;
  try {
    if (!config.uses_mock()) cache->load(cache_path);
    oracle = make_oracle(config, cache);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckpoint;
  } catch (const Error& e) {
    std::cerr << "error: oracle unavailable: " << e.what() << "\n";
    return kExitOracle;
  }

  oracle->query_log().open_sink(opts.out_dir / out_files::kQueries, opts.resume);
  JsonlLog rejections;
  rejections.open_sink(opts.out_dir / out_files::kRejected, opts.resume);

  std::optional<Crawler> crawler;
  if (state) {
    crawler.emplace(config, *oracle, std::move(*state));
  } else {
    crawler.emplace(config, *oracle);
  }
  crawler->set_checkpoint_path(opts.out_dir / out_files::kCheckpoint);
  crawler->set_rejection_log(&rejections);
  if (!config.uses_mock()) {
    crawler->set_after_checkpoint([&] { cache->save(cache_path); });
  }

  try {
    const bool complete = crawler->run(opts.max_explorations);
    write_outputs(opts.out_dir, config, crawler->state());
    const auto& h = crawler->state().hierarchy;
    std::cout << (complete ? "crawl complete: " : "crawl paused: ") << h.size()
              << " concepts, " << h.edge_count() << " direct subsumptions, output in "
              << opts.out_dir.string() << "\n";
    return kExitOk;
  } catch (const TransportError& e) {
    if (!config.uses_mock()) cache->save(cache_path);
    std::cerr << "error: oracle failure, crawl aborted: " << e.what() << "\n"
              << "resume with: ontocrawl resume "
              << (opts.out_dir / out_files::kCheckpoint).string() << "\n";
    return kExitAborted;
  } catch (const CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckpoint;
  }
}

std::optional<Checkpoint> load(const fs::path& path) {
  try {
    return read_checkpoint(path);
  } catch (const CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Builds concept hierarchies by questioning a language model"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->capture_default_str();

  // crawl
  auto* crawl_cmd = app.add_subcommand("crawl", "Build a hierarchy from a seed concept");
  std::string config_file;
  CrawlFlags flags;
  std::string out_dir = "out";
  std::size_t max_explorations = 0;
  crawl_cmd->add_option("--config", config_file, "JSON configuration file");
  crawl_cmd->add_option("--seed", flags.seed, "Seed concept");
  crawl_cmd->add_option("--depth", flags.depth, "Exploration depth, or none");
  crawl_cmd->add_option("--ft", flags.ft, "Frequency threshold");
  crawl_cmd->add_option("--samples", flags.samples, "First-token samples per listing");
  crawl_cmd->add_option("--model", flags.model, "Chat model name");
  crawl_cmd->add_option("--oracle", flags.oracle, "llm or mock:<fixture.json>");
  crawl_cmd->add_option("--max-concepts", flags.max_concepts, "Stop at this many concepts");
  crawl_cmd->add_option("--base-iri", flags.base_iri, "Base IRI of the OWL classes");
  crawl_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  crawl_cmd->add_option("--max-explorations", max_explorations,
                        "Pause after this many explorations (0: no limit)");

  // resume
  auto* resume_cmd = app.add_subcommand("resume", "Continue a crawl from its checkpoint");
  std::string checkpoint_path;
  std::string resume_out;
  resume_cmd->add_option("checkpoint", checkpoint_path, "checkpoint.json")->required();
  resume_cmd->add_option("--out-dir", resume_out, "Output directory (default: beside it)");
  resume_cmd->add_option("--max-explorations", max_explorations,
                         "Pause after this many explorations (0: no limit)");

  // export
  auto* export_cmd = app.add_subcommand("export", "Render a checkpoint's hierarchy");
  std::string format;
  std::string export_out;
  std::string export_iri;
  export_cmd->add_option("checkpoint", checkpoint_path, "checkpoint.json")->required();
  export_cmd->add_option("format", format, "owl, dot or json")
      ->required()
      ->check(CLI::IsMember({"owl", "dot", "json"}));
  export_cmd->add_option("-o,--output", export_out, "Output file (default: stdout)");
  export_cmd->add_option("--base-iri", export_iri, "Base IRI (default: the crawl's)");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Print statistics of a checkpoint");
  bool stats_json = false;
  stats_cmd->add_option("checkpoint", checkpoint_path, "checkpoint.json")->required();
  stats_cmd->add_flag("--json", stats_json, "Print JSON instead of tables");

  // validate-fixture
  auto* fixture_cmd =
      app.add_subcommand("validate-fixture", "Check a mock-oracle taxonomy file");
  std::string fixture_path;
  fixture_cmd->add_option("fixture", fixture_path, "Taxonomy JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto level = spdlog::level::from_str(log_level);
  spdlog::set_level(level);

  const std::optional<std::size_t> explore_limit =
      max_explorations ? std::optional<std::size_t>(max_explorations) : std::nullopt;

  if (*crawl_cmd) {
    CrawlConfig config;
    try {
      config = compose_config(
          config_file.empty() ? std::nullopt : std::optional<fs::path>(config_file), flags);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
    return crawl(config, std::nullopt, {out_dir, explore_limit, false});
  }

  if (*resume_cmd) {
    auto cp = load(checkpoint_path);
    if (!cp) return kExitCheckpoint;
    const fs::path dir =
        resume_out.empty() ? fs::path(checkpoint_path).parent_path() : fs::path(resume_out);
    return crawl(cp->config, std::move(cp->state),
                 {dir.empty() ? fs::path(".") : dir, explore_limit, true});
  }

  if (*export_cmd) {
    auto cp = load(checkpoint_path);
    if (!cp) return kExitCheckpoint;
    std::string text;
    try {
      if (format == "owl") {
        text = to_owl_rdfxml(cp->state.hierarchy,
                             export_iri.empty() ? cp->config.base_iri : export_iri);
      } else if (format == "dot") {
        text = to_dot(cp->state.hierarchy);
      } else {
        text = cp->state.hierarchy.to_json().dump(2) + "\n";
      }
    } catch (const EncodingError& e) {
      std::cerr << "error: " << e.what() << ": " << e.offending() << "\n";
      return kExitUsage;
    }
    if (export_out.empty()) {
      std::cout << text;
    } else {
      write_text(export_out, text);
    }
    return kExitOk;
  }

  if (*stats_cmd) {
    auto cp = load(checkpoint_path);
    if (!cp) return kExitCheckpoint;
    const auto stats = compute_stats(cp->config, cp->state);
    std::cout << (stats_json ? stats.to_json().dump(2) + "\n" : render_stats(stats));
    return kExitOk;
  }

  if (*fixture_cmd) {
    try {
      MockOracle oracle(GroundTruthTaxonomy::load(fixture_path));
      const auto& t = oracle.taxonomy();
      std::cout << "ok: root " << t.root << ", " << t.edges.size() << " edges, "
                << t.synonyms.size() << " synonym pairs\n";
      return kExitOk;
    } catch (const Error& e) {
      std::cerr << "invalid fixture: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return kExitUsage;
}

}  // namespace ontocrawl
