#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json_fwd.hpp>

#include "ontocrawl/oracle.hpp"
#include "ontocrawl/prompts.hpp"

namespace ontocrawl {

// Reference taxonomy backing the mock oracle. Edges are kept in file order;
// listing answers follow that order.
struct GroundTruthTaxonomy {
  std::string root;
  std::vector<std::pair<std::string, std::string>> edges;  // (child, parent)
  std::vector<std::pair<std::string, std::string>> synonyms;
  std::map<std::string, std::string> descriptions;
  // Names the source wrongly offers as subconcepts of a concept.
  std::map<std::string, std::vector<std::string>> instances;
  std::map<std::string, std::vector<std::string>> parts;

  nlohmann::json to_json() const;
  // Throws InvalidInputError on malformed documents.
  static GroundTruthTaxonomy from_json(const nlohmann::json& doc);
  static GroundTruthTaxonomy load(const std::filesystem::path& path);
};

// Error model mirroring the observed failure modes of chat models. Every
// random decision is derived from the seed and the content of the question,
// so answers do not depend on call order or concurrency.
struct NoiseModel {
  std::uint64_t rng_seed = 0;
  double p_hallucinated_edge = 0.0;
  double p_missing_edge = 0.0;
  double p_wrong_relation = 0.0;
  double p_attribute_inflation = 0.0;
  double p_nontransitive_denial = 0.0;

  bool is_noise_free() const noexcept;
  // Throws InvalidInputError when a probability lies outside [0, 1].
  void validate() const;

  nlohmann::json to_json() const;
  static NoiseModel from_json(const nlohmann::json& doc);
};

class MockOracle : public Oracle {
 public:
  // Throws InvalidInputError when the taxonomy is cyclic, has unreachable
  // names or the noise model is invalid.
  explicit MockOracle(GroundTruthTaxonomy taxonomy, NoiseModel noise = {});

  bool has_subconcepts(const OracleContext& ctx, const std::string& c) override;
  std::vector<std::string> list_subconcepts(const OracleContext& ctx,
                                            const std::string& c, int ft,
                                            int n_samples) override;
  std::map<std::string, std::string> describe(
      const OracleContext& ctx, const std::string& c,
      const std::vector<std::string>& names) override;
  bool is_instance(const OracleContext& ctx, const std::string& d) override;
  bool is_part(const OracleContext& ctx, const std::string& d) override;
  bool under_seed(const OracleContext& ctx, const std::string& d) override;
  bool is_subcategory_of(const OracleContext& ctx, const std::string& d,
                         const std::string& c) override;
  std::optional<std::string> rename_from_description(
      const OracleContext& ctx, const std::string& c,
      const std::string& description) override;
  bool interchangeable(const OracleContext& ctx, const std::string& d1,
                       const std::string& d2) override;
  std::pair<std::string, std::string> subcategory_direction(
      const OracleContext& ctx, const std::string& d1,
      const std::string& d2) override;

  const GroundTruthTaxonomy& taxonomy() const noexcept { return taxonomy_; }

  // Ground-truth reachability between two known names (reflexive). Unknown
  // names are never subsumed.
  bool truth_subsumes(const std::string& sub, const std::string& super) const;

 private:
  // A name resolved against the taxonomy. Inflated names ("Premium X")
  // resolve to the class of X and are flagged.
  struct Resolved {
    std::size_t cls;
    bool inflated;
  };

  std::optional<Resolved> resolve(const std::string& name) const;
  std::vector<std::string> noisy_children(const std::string& c) const;
  bool chance(double p, std::initializer_list<std::string_view> key) const;
  std::uint64_t draw(std::initializer_list<std::string_view> key) const;
  void log(QueryKind kind, const Bindings& bindings, const OracleContext& ctx,
           const std::string& reply);

  GroundTruthTaxonomy taxonomy_;
  NoiseModel noise_;
  // Node names in order of first appearance, and their synonym classes.
  std::vector<std::string> node_names_;
  std::unordered_map<std::string, std::size_t> node_of_;  // normalized name
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<std::size_t>> class_children_;  // child nodes, file order
  std::vector<boost::dynamic_bitset<>> class_up_;
  std::unordered_map<std::string, std::size_t> instance_names_;
  std::unordered_map<std::string, std::size_t> part_names_;
};

}  // namespace ontocrawl
