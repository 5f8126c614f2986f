#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ontocrawl/crawler.hpp"
#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"
#include "ontocrawl/parsing.hpp"
#include "ontocrawl/stats.hpp"
#include "support/graph_oracle.hpp"
#include "support/hierarchy_view.hpp"

using namespace ontocrawl;
namespace fs = std::filesystem;
using testsupport::NameEdge;

namespace {

const std::string kFixtures = ONTOCRAWL_FIXTURE_DIR;

CrawlConfig config_for(const std::string& seed, const std::string& fixture) {
  CrawlConfig c;
  c.seed_name = seed;
  c.oracle = "mock:" + fixture;
  return c;
}

const std::set<NameEdge> kGoatsEdges{
    {"Meat Goats", "Goats"},         {"Fiber Goats", "Goats"},
    {"Dairy Goats", "Goats"},        {"Mini. Goats", "Goats"},
    {"Show Goats", "Goats"},         {"Nigerian Dwarf", "Dairy Goats"},
    {"Saanen", "Dairy Goats"},       {"Toggenburg", "Dairy Goats"},
    {"Dwarf Nigerian", "Mini. Goats"}, {"Nigerian Dwarf", "Mini. Goats"},
    {"Cashmere", "Fiber Goats"},     {"Nigora", "Fiber Goats"},
    {"Mini. Nubian", "Mini. Goats"}, {"Boer", "Meat Goats"}};

fs::path temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("ontocrawl_test_" + tag + "_" +
                                          std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir;
}

// Records the depth of every concept asked about for existence or listing.
class AuditedMock : public MockOracle {
 public:
  using MockOracle::MockOracle;
  const Crawler* crawler = nullptr;
  std::vector<std::size_t> asked_depths;

  bool has_subconcepts(const OracleContext& ctx, const std::string& c) override {
    note(c);
    return MockOracle::has_subconcepts(ctx, c);
  }
  std::vector<std::string> list_subconcepts(const OracleContext& ctx, const std::string& c,
                                            int ft, int n) override {
    note(c);
    return MockOracle::list_subconcepts(ctx, c, ft, n);
  }

 private:
  void note(const std::string& c) {
    const auto& h = crawler->state().hierarchy;
    asked_depths.push_back(h.depth_of(*h.find(c)));
  }
};

}  // namespace

TEST(Crawl, ReproducesTheGoatsExcerpt) {
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  EXPECT_TRUE(crawler.run());
  const auto& h = crawler.state().hierarchy;
  EXPECT_EQ(h.size(), 14u);
  EXPECT_EQ(testsupport::edge_names(h), kGoatsEdges);
  const auto nd = *h.find("Nigerian Dwarf");
  EXPECT_EQ(h.parents(nd).size(), 2u);
  EXPECT_EQ(crawler.state().n_rejected, 0u);
  EXPECT_EQ(h.concept_at(*h.find("Saanen")).description, "A large white Swiss dairy breed.");
  h.verify();
}

TEST(Crawl, NoSubconceptsAtTheSeedStopsImmediately) {
  GroundTruthTaxonomy t;
  t.root = "Goats";
  MockOracle oracle(t);
  CrawlConfig config;
  config.seed_name = "Goats";
  Crawler crawler(config, oracle);
  EXPECT_TRUE(crawler.run());
  const auto s = compute_stats(config, crawler.state());
  EXPECT_EQ(s.n_C, 1u);
  EXPECT_EQ(s.n_sub, 0u);
  EXPECT_EQ(oracle.query_log().size(), 1u);
}

TEST(Crawl, ExplorationStopsAtTheDepthCutoff) {
  for (int cutoff : {1, 2, 3}) {
    auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
    config.exploration_depth = cutoff;
    AuditedMock oracle(GroundTruthTaxonomy::load(config.mock_path()));
    Crawler crawler(config, oracle);
    oracle.crawler = &crawler;
    EXPECT_TRUE(crawler.run());
    ASSERT_FALSE(oracle.asked_depths.empty());
    for (auto d : oracle.asked_depths) EXPECT_LT(d, static_cast<std::size_t>(cutoff));
    const auto s = compute_stats(config, crawler.state());
    std::size_t above = 0;
    const auto& h = crawler.state().hierarchy;
    for (auto id : h.ids()) above += h.depth_of(id) > static_cast<std::size_t>(cutoff);
    EXPECT_EQ(s.concepts_above_cutoff, above);
    EXPECT_EQ(s.concepts_at_or_below_cutoff + s.concepts_above_cutoff, s.n_C);
  }
  auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  config.exploration_depth = 1;
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  crawler.run();
  // Only the seed is explored: its five direct subconcepts.
  EXPECT_EQ(crawler.state().hierarchy.size(), 6u);
}

TEST(Crawl, ConceptCapEndsTheRun) {
  auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  config.max_concepts = 4;
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  EXPECT_TRUE(crawler.run());
  EXPECT_EQ(crawler.state().hierarchy.size(), 4u);
  EXPECT_TRUE(crawler.finished());
}

TEST(Crawl, RejectedCandidatesAreCountedAndLogged) {
  GroundTruthTaxonomy t = GroundTruthTaxonomy::load(kFixtures + "/verify_university.json");
  NoiseModel noise{.rng_seed = 3, .p_wrong_relation = 1.0};
  MockOracle oracle(t, noise);
  CrawlConfig config;
  config.seed_name = t.root;
  JsonlLog rejections;
  Crawler crawler(config, oracle);
  crawler.set_rejection_log(&rejections);
  crawler.run();
  EXPECT_GT(crawler.state().n_rejected, 0u);
  EXPECT_EQ(rejections.size(), crawler.state().n_rejected);
  for (const auto& r : rejections.records()) {
    EXPECT_TRUE(r["reason"] == "instance" || r["reason"] == "part") << r.dump();
  }
  EXPECT_FALSE(crawler.state().hierarchy.find("Yale University"));
}

TEST(Crawl, EveryConceptWasListedOrRenamed) {
  NoiseModel noise{.rng_seed = 21, .p_hallucinated_edge = 0.1, .p_missing_edge = 0.1,
                   .p_wrong_relation = 0.3, .p_attribute_inflation = 0.3,
                   .p_nontransitive_denial = 0.2};
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()), noise);
  Crawler crawler(config, oracle);
  EXPECT_TRUE(crawler.run());
  std::set<std::string> offered;
  for (const auto& r : oracle.query_log().records()) {
    const std::string reply = r["reply"];
    if (r["template_name"] == "listing") {
      for (const auto& n : parse_csv_list(reply)) offered.insert(normalize_name(n));
    } else if (r["template_name"] == "rename" && !reply.empty()) {
      offered.insert(normalize_name(reply));
    }
  }
  const auto& h = crawler.state().hierarchy;
  for (auto id : h.ids()) {
    if (id == h.seed()) continue;
    const auto& c = h.concept_at(id);
    EXPECT_TRUE(offered.contains(normalize_name(c.canonical_name))) << c.canonical_name;
    for (const auto& s : c.synonym_names)
      EXPECT_TRUE(offered.contains(normalize_name(s))) << s;
  }
  h.verify();
}

TEST(Crawl, PromptsPerConceptMatchesTheLedger) {
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  crawler.run();
  const auto s = compute_stats(config, crawler.state());
  EXPECT_EQ(s.requests, oracle.ledger().snapshot().requests);
  EXPECT_EQ(s.requests, oracle.query_log().size());
  EXPECT_DOUBLE_EQ(s.prompts_per_concept, static_cast<double>(s.requests) / s.n_C);
}

TEST(Crawl, RandomTaxonomiesAreRecoveredExactly) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(10, 40)(rng);
    const auto g = testsupport::random_dag(rng, n);
    MockOracle oracle(GroundTruthTaxonomy::from_json(testsupport::taxonomy_json(g)));
    CrawlConfig config;
    config.seed_name = g.names[0];
    Crawler crawler(config, oracle);
    ASSERT_TRUE(crawler.run());
    const auto reach = testsupport::closure(g.size(), g.edges);
    ASSERT_EQ(testsupport::edge_names(crawler.state().hierarchy),
              testsupport::named(g, testsupport::reduction(reach)))
        << "trial " << trial;
  }
}

TEST(Crawl, ResumedRunEqualsUninterruptedRun) {
  NoiseModel noise{.rng_seed = 8, .p_hallucinated_edge = 0.05, .p_missing_edge = 0.1,
                   .p_wrong_relation = 0.2, .p_attribute_inflation = 0.2};
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  const auto t = GroundTruthTaxonomy::load(config.mock_path());

  MockOracle straight_oracle(t, noise);
  Crawler straight(config, straight_oracle);
  straight.run();
  const auto want = checkpoint_to_json(config, straight.state());

  for (std::size_t k : {1u, 3u, 6u}) {
    const auto dir = temp_dir("resume");
    const auto path = dir / "checkpoint.json";
    {
      MockOracle first(t, noise);
      Crawler crawler(config, first);
      crawler.set_checkpoint_path(path);
      EXPECT_FALSE(crawler.run(k));
    }
    auto cp = read_checkpoint(path);
    EXPECT_EQ(cp.state.explorations, k);
    MockOracle second(t, noise);
    Crawler resumed(cp.config, second, std::move(cp.state));
    EXPECT_TRUE(resumed.run());
    EXPECT_EQ(checkpoint_to_json(config, resumed.state()), want) << "k " << k;
    fs::remove_all(dir);
  }
}

TEST(Checkpoint, RoundTripsThroughJson) {
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  crawler.run(4);
  const auto doc = checkpoint_to_json(config, crawler.state());
  const auto back = checkpoint_from_json(doc);
  EXPECT_EQ(checkpoint_to_json(back.config, back.state), doc);
  EXPECT_EQ(back.state.ledger.requests, oracle.ledger().snapshot().requests);
}

TEST(Checkpoint, CorruptionAndVersionMismatchAreRefused) {
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  MockOracle oracle(GroundTruthTaxonomy::load(config.mock_path()));
  Crawler crawler(config, oracle);
  crawler.run(2);
  const auto doc = checkpoint_to_json(config, crawler.state());

  auto tampered = doc;
  tampered["body"]["n_rejected"] = 99;
  EXPECT_THROW(checkpoint_from_json(tampered), CheckpointError);
  auto newer = doc;
  newer["version"] = kCheckpointVersion + 1;
  EXPECT_THROW(checkpoint_from_json(newer), CheckpointError);
  auto foreign = doc;
  foreign["format"] = "something-else";
  EXPECT_THROW(checkpoint_from_json(foreign), CheckpointError);
  EXPECT_THROW(checkpoint_from_json(nlohmann::json::array()), CheckpointError);

  const auto dir = temp_dir("corrupt");
  const auto path = dir / "checkpoint.json";
  write_checkpoint(path, config, crawler.state());
  {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    std::ofstream out(path, std::ios::trunc);
    out << text.substr(0, text.size() / 2);
  }
  EXPECT_THROW(read_checkpoint(path), CheckpointError);
  EXPECT_THROW(read_checkpoint(dir / "missing.json"), CheckpointError);
  fs::remove_all(dir);
}

TEST(Checkpoint, TransportFailureLeavesTheLastGoodState) {
  class Failing : public MockOracle {
   public:
    using MockOracle::MockOracle;
    int budget = 5;
    bool is_subcategory_of(const OracleContext& ctx, const std::string& d,
                           const std::string& c) override {
      if (ctx.phase == "verify" && --budget < 0) throw TransportError("gone", false);
      return MockOracle::is_subcategory_of(ctx, d, c);
    }
  };
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  Failing oracle(GroundTruthTaxonomy::load(config.mock_path()));
  const auto dir = temp_dir("abort");
  Crawler crawler(config, oracle);
  crawler.set_checkpoint_path(dir / "checkpoint.json");
  // Verification swallows transport errors as inconclusive; the crawl still
  // completes, with the affected candidates rejected.
  EXPECT_TRUE(crawler.run());
  EXPECT_GT(crawler.state().n_rejected, 0u);
  const auto cp = read_checkpoint(dir / "checkpoint.json");
  EXPECT_EQ(cp.state.explorations, crawler.state().explorations);
  fs::remove_all(dir);
}

TEST(Checkpoint, ExistenceFailureAbortsResumably) {
  class Failing : public MockOracle {
   public:
    using MockOracle::MockOracle;
    int budget = 3;
    bool has_subconcepts(const OracleContext& ctx, const std::string& c) override {
      if (--budget < 0) throw TransportError("gone", false);
      return MockOracle::has_subconcepts(ctx, c);
    }
  };
  const auto config = config_for("Goats", kFixtures + "/goats_excerpt.json");
  const auto t = GroundTruthTaxonomy::load(config.mock_path());
  Failing oracle(t);
  const auto dir = temp_dir("abort2");
  Crawler crawler(config, oracle);
  crawler.set_checkpoint_path(dir / "checkpoint.json");
  EXPECT_THROW(crawler.run(), TransportError);
  auto cp = read_checkpoint(dir / "checkpoint.json");
  EXPECT_EQ(cp.state.explorations, 3u);
  MockOracle healthy(t);
  Crawler resumed(cp.config, healthy, std::move(cp.state));
  EXPECT_TRUE(resumed.run());
  EXPECT_EQ(testsupport::edge_names(resumed.state().hierarchy), kGoatsEdges);
  fs::remove_all(dir);
}

TEST(Config, ValidationRejectsBadValues) {
  CrawlConfig ok;
  ok.seed_name = "Goats";
  EXPECT_NO_THROW(ok.validate());
  auto bad = ok;
  bad.seed_name = "  ";
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = ok;
  bad.ft = 150;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = ok;
  bad.ft = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = ok;
  bad.exploration_depth = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = ok;
  bad.oracle = "gpt";
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, JsonRoundTripAndStrictKeys) {
  CrawlConfig c;
  c.seed_name = "Coffee";
  c.exploration_depth = 2;
  c.ft = 5;
  c.max_concepts = 300;
  c.params.model = "gpt-4";
  const auto back = CrawlConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(c.to_json()["exploration_depth"], 2);
  CrawlConfig unbounded;
  EXPECT_EQ(unbounded.to_json()["exploration_depth"], "none");
  EXPECT_FALSE(CrawlConfig::from_json({{"exploration_depth", "none"}}).exploration_depth);
  EXPECT_THROW(CrawlConfig::from_json({{"seed", "Goats"}}), ConfigError);
  EXPECT_THROW(CrawlConfig::from_json({{"ft", "many"}}), ConfigError);
  const auto partial = CrawlConfig::from_json({{"ft", 7}}, c);
  EXPECT_EQ(partial.ft, 7);
  EXPECT_EQ(partial.seed_name, "Coffee");
  EXPECT_FALSE(c.to_json().dump().find("api_key") != std::string::npos);
}
