#include "ontocrawl/mock_oracle.hpp"

#include <array>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/hashing.hpp"
#include "ontocrawl/names.hpp"

namespace ontocrawl {

namespace {

constexpr std::array<std::string_view, 6> kInflations = {
    "Premium", "Heritage", "Organic", "Show-quality", "Rare", "Traditional"};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroundTruthTaxonomy

nlohmann::json GroundTruthTaxonomy::to_json() const {
  nlohmann::json e = nlohmann::json::array();
  for (const auto& [c, p] : edges) e.push_back({c, p});
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [a, b] : synonyms) s.push_back({a, b});
  return {{"root", root},         {"edges", e},         {"synonyms", s},
          {"descriptions", descriptions}, {"instances", instances},
          {"parts", parts}};
}

GroundTruthTaxonomy GroundTruthTaxonomy::from_json(const nlohmann::json& doc) {
  try {
    GroundTruthTaxonomy t;
    t.root = doc.at("root").get<std::string>();
    if (is_blank(t.root)) throw InvalidInputError("fixture root must not be empty");
    for (const auto& e : doc.value("edges", nlohmann::json::array())) {
      if (e.size() != 2) throw InvalidInputError("fixture edge must be [child, parent]");
      t.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    for (const auto& s : doc.value("synonyms", nlohmann::json::array())) {
      if (s.size() != 2) throw InvalidInputError("fixture synonym must be a pair");
      t.synonyms.emplace_back(s[0].get<std::string>(), s[1].get<std::string>());
    }
    t.descriptions = doc.value("descriptions", std::map<std::string, std::string>{});
    t.instances =
        doc.value("instances", std::map<std::string, std::vector<std::string>>{});
    t.parts = doc.value("parts", std::map<std::string, std::vector<std::string>>{});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed fixture: ") + e.what());
  }
}

GroundTruthTaxonomy GroundTruthTaxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open fixture " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("fixture " + path.string() + " is not valid JSON: " +
                            e.what());
  }
  return from_json(doc);
}

// ---------------------------------------------------------------------------
// NoiseModel

bool NoiseModel::is_noise_free() const noexcept {
  return p_hallucinated_edge == 0.0 && p_missing_edge == 0.0 &&
         p_wrong_relation == 0.0 && p_attribute_inflation == 0.0 &&
         p_nontransitive_denial == 0.0;
}

void NoiseModel::validate() const {
  for (double p : {p_hallucinated_edge, p_missing_edge, p_wrong_relation,
                   p_attribute_inflation, p_nontransitive_denial}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInputError("noise probabilities must lie in [0, 1]");
    }
  }
}

nlohmann::json NoiseModel::to_json() const {
  return {{"rng_seed", rng_seed},
          {"p_hallucinated_edge", p_hallucinated_edge},
          {"p_missing_edge", p_missing_edge},
          {"p_wrong_relation", p_wrong_relation},
          {"p_attribute_inflation", p_attribute_inflation},
          {"p_nontransitive_denial", p_nontransitive_denial}};
}

NoiseModel NoiseModel::from_json(const nlohmann::json& doc) {
  NoiseModel n;
  n.rng_seed = doc.value("rng_seed", std::uint64_t{0});
  n.p_hallucinated_edge = doc.value("p_hallucinated_edge", 0.0);
  n.p_missing_edge = doc.value("p_missing_edge", 0.0);
  n.p_wrong_relation = doc.value("p_wrong_relation", 0.0);
  n.p_attribute_inflation = doc.value("p_attribute_inflation", 0.0);
  n.p_nontransitive_denial = doc.value("p_nontransitive_denial", 0.0);
  n.validate();
  return n;
}

// ---------------------------------------------------------------------------
// MockOracle

MockOracle::MockOracle(GroundTruthTaxonomy taxonomy, NoiseModel noise)
    : taxonomy_(std::move(taxonomy)), noise_(noise) {
  noise_.validate();
  if (is_blank(taxonomy_.root)) throw InvalidInputError("fixture root must not be empty");

  auto node = [&](const std::string& name) -> std::size_t {
    if (is_blank(name)) throw InvalidInputError("fixture contains an empty name");
    auto key = normalize_name(name);
    auto it = node_of_.find(key);
    if (it != node_of_.end()) return it->second;
    node_names_.push_back(trim(name));
    node_of_.emplace(std::move(key), node_names_.size() - 1);
    return node_names_.size() - 1;
  };
  node(taxonomy_.root);
  for (const auto& [c, p] : taxonomy_.edges) {
    node(c);
    node(p);
  }
  for (const auto& [a, b] : taxonomy_.synonyms) {
    node(a);
    node(b);
  }

  // Synonym classes.
  std::vector<std::size_t> uf(node_names_.size());
  std::iota(uf.begin(), uf.end(), 0);
  for (const auto& [a, b] : taxonomy_.synonyms) {
    auto ra = find_root(uf, node(a));
    auto rb = find_root(uf, node(b));
    if (ra != rb) uf[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::unordered_map<std::size_t, std::size_t> class_index;
  class_of_.resize(node_names_.size());
  for (std::size_t n = 0; n < node_names_.size(); ++n) {
    auto r = find_root(uf, n);
    auto [it, fresh] = class_index.emplace(r, class_index.size());
    class_of_[n] = it->second;
  }
  const std::size_t classes = class_index.size();
  class_children_.assign(classes, {});

  std::vector<std::vector<std::size_t>> class_parents(classes);
  for (const auto& [c, p] : taxonomy_.edges) {
    const auto cn = node(c);
    const auto cc = class_of_[cn];
    const auto pc = class_of_[node(p)];
    if (cc == pc) {
      throw InvalidInputError("fixture edge between synonyms: " + c + " / " + p);
    }
    auto& kids = class_children_[pc];
    if (std::find(kids.begin(), kids.end(), cn) == kids.end()) kids.push_back(cn);
    class_parents[cc].push_back(pc);
  }

  // Closure over classes, top-down in topological order.
  std::vector<std::size_t> pending(classes);
  for (std::size_t c = 0; c < classes; ++c) pending[c] = class_parents[c].size();
  std::vector<std::vector<std::size_t>> class_child_classes(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    for (auto p : class_parents[c]) class_child_classes[p].push_back(c);
  }
  class_up_.assign(classes, boost::dynamic_bitset<>(classes));
  std::deque<std::size_t> ready;
  for (std::size_t c = 0; c < classes; ++c) {
    if (pending[c] == 0) ready.push_back(c);
  }
  std::size_t done = 0;
  while (!ready.empty()) {
    auto c = ready.front();
    ready.pop_front();
    ++done;
    class_up_[c].set(c);
    for (auto p : class_parents[c]) class_up_[c] |= class_up_[p];
    for (auto ch : class_child_classes[c]) {
      if (--pending[ch] == 0) ready.push_back(ch);
    }
  }
  if (done != classes) throw InvalidInputError("fixture edges contain a cycle");

  const auto root_class = class_of_[0];
  for (std::size_t n = 0; n < node_names_.size(); ++n) {
    if (!class_up_[class_of_[n]].test(root_class)) {
      throw InvalidInputError("fixture name not reachable from root: " +
                              node_names_[n]);
    }
  }

  for (const auto& [concept_name, names] : taxonomy_.instances) {
    for (const auto& n : names) instance_names_.emplace(normalize_name(n), 0);
  }
  for (const auto& [concept_name, names] : taxonomy_.parts) {
    for (const auto& n : names) part_names_.emplace(normalize_name(n), 0);
  }
}

std::uint64_t MockOracle::draw(std::initializer_list<std::string_view> key) const {
  Fnv1a64 h;
  h.field(std::to_string(noise_.rng_seed));
  for (auto k : key) h.field(normalize_name(k));
  std::mt19937_64 rng(h.digest());
  return rng();
}

bool MockOracle::chance(double p, std::initializer_list<std::string_view> key) const {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const double u = static_cast<double>(draw(key) >> 11) * 0x1.0p-53;
  return u < p;
}

std::optional<MockOracle::Resolved> MockOracle::resolve(const std::string& name) const {
  auto key = normalize_name(name);
  if (auto it = node_of_.find(key); it != node_of_.end()) {
    return Resolved{class_of_[it->second], false};
  }
  for (auto adj : kInflations) {
    auto prefix = normalize_name(adj) + " ";
    if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) {
      if (auto it = node_of_.find(key.substr(prefix.size())); it != node_of_.end()) {
        return Resolved{class_of_[it->second], true};
      }
    }
  }
  return std::nullopt;
}

bool MockOracle::truth_subsumes(const std::string& sub, const std::string& super) const {
  auto rs = resolve(sub);
  auto rp = resolve(super);
  if (!rs || !rp) return false;
  if (rp->inflated) return same_name(sub, super);
  return class_up_[rs->cls].test(rp->cls);
}

std::vector<std::string> MockOracle::noisy_children(const std::string& c) const {
  std::vector<std::string> out;
  auto rc = resolve(c);
  if (!rc || rc->inflated) return out;

  for (auto n : class_children_[rc->cls]) {
    const auto& child = node_names_[n];
    if (chance(noise_.p_missing_edge, {"missing", c, child})) continue;
    out.push_back(child);
    if (chance(noise_.p_attribute_inflation, {"inflate", c, child})) {
      auto adj = kInflations[draw({"adjective", c, child}) % kInflations.size()];
      out.push_back(std::string(adj) + " " + child);
    }
  }
  for (const auto* annotations : {&taxonomy_.instances, &taxonomy_.parts}) {
    for (const auto& [owner, names] : *annotations) {
      if (!same_name(owner, c)) continue;
      for (const auto& n : names) {
        if (chance(noise_.p_wrong_relation, {"wrong", c, n})) out.push_back(n);
      }
    }
  }
  if (chance(noise_.p_hallucinated_edge, {"hallucinate-list", c})) {
    const auto& pick = node_names_[draw({"hallucinate-pick", c}) % node_names_.size()];
    const auto rp = class_of_[node_of_.at(normalize_name(pick))];
    if (!class_up_[rc->cls].test(rp)) out.push_back(pick);
  }
  return out;
}

void MockOracle::log(QueryKind kind, const Bindings& bindings,
                     const OracleContext& ctx, const std::string& reply) {
  QueryRecord r;
  r.template_name = std::string(to_string(kind));
  r.prompt = render(kind, bindings, ctx);
  r.params = {{"backend", "mock"}};
  r.reply = reply;
  r.phase = ctx.phase;
  query_log().append(r);
  ledger().record(0, 0);
}

bool MockOracle::has_subconcepts(const OracleContext& ctx, const std::string& c) {
  const bool answer = !noisy_children(c).empty();
  log(QueryKind::existence, {{"C", c}}, ctx, yes_no(answer));
  return answer;
}

std::vector<std::string> MockOracle::list_subconcepts(const OracleContext& ctx,
                                                      const std::string& c, int,
                                                      int) {
  auto out = noisy_children(c);
  std::string reply;
  for (const auto& n : out) reply += (reply.empty() ? "" : ", ") + n;
  log(QueryKind::listing, {{"C", c}}, ctx, reply);
  return out;
}

std::map<std::string, std::string> MockOracle::describe(
    const OracleContext& ctx, const std::string& c,
    const std::vector<std::string>& names) {
  std::map<std::string, std::string> out;
  std::string list;
  std::string reply;
  for (const auto& n : names) {
    std::string text;
    for (const auto& [k, v] : taxonomy_.descriptions) {
      if (same_name(k, n)) {
        text = v;
        break;
      }
    }
    if (text.empty()) {
      auto r = resolve(n);
      if (r && r->inflated) {
        text = "A particular variety of " + node_names_[node_of_.at(normalize_name(
                   n.substr(n.find(' ') + 1)))] + ".";
      } else {
        text = "A subcategory of " + c + ".";
      }
    }
    list += (list.empty() ? "" : ", ") + n;
    reply += n + ": " + text + "\n";
    out[n] = std::move(text);
  }
  log(QueryKind::description, {{"C", c}, {"list", list}}, ctx, reply);
  return out;
}

bool MockOracle::is_instance(const OracleContext& ctx, const std::string& d) {
  const bool answer = instance_names_.contains(normalize_name(d));
  log(QueryKind::verify_instance, {{"D", d}}, ctx, answer ? "Instance" : "Subcategory");
  return answer;
}

bool MockOracle::is_part(const OracleContext& ctx, const std::string& d) {
  const bool answer = part_names_.contains(normalize_name(d));
  log(QueryKind::verify_part, {{"D", d}}, ctx, answer ? "Part" : "Subcategory");
  return answer;
}

bool MockOracle::under_seed(const OracleContext& ctx, const std::string& d) {
  const bool answer = resolve(d).has_value();
  log(QueryKind::verify_seed, {{"D", d}}, ctx, yes_no(answer));
  return answer;
}

bool MockOracle::is_subcategory_of(const OracleContext& ctx, const std::string& d,
                                   const std::string& c) {
  bool answer = truth_subsumes(d, c);
  if (!answer) {
    answer = chance(noise_.p_hallucinated_edge, {"hallucinate-sub", d, c});
  } else if (noise_.p_nontransitive_denial > 0.0) {
    auto rd = resolve(d);
    auto rc = resolve(c);
    bool direct = rd->cls == rc->cls;
    for (auto n : class_children_[rc->cls]) direct = direct || class_of_[n] == rd->cls;
    if (!direct && chance(noise_.p_nontransitive_denial, {"nontransitive", d, c})) {
      answer = false;
    }
  }
  log(QueryKind::verify_subcat, {{"C", c}, {"D", d}}, ctx, yes_no(answer));
  return answer;
}

std::optional<std::string> MockOracle::rename_from_description(
    const OracleContext& ctx, const std::string& c, const std::string& description) {
  std::optional<std::string> answer;
  const auto wanted = trim(description);
  if (auto rc = resolve(c); rc && !wanted.empty()) {
    for (std::size_t n = 0; n < node_names_.size() && !answer; ++n) {
      if (!class_up_[class_of_[n]].test(rc->cls)) continue;
      for (const auto& [k, v] : taxonomy_.descriptions) {
        if (same_name(k, node_names_[n]) && trim(v) == wanted) {
          answer = node_names_[n];
          break;
        }
      }
    }
  }
  log(QueryKind::rename, {{"C", c}, {"desc", description}}, ctx, answer.value_or(""));
  return answer;
}

bool MockOracle::interchangeable(const OracleContext& ctx, const std::string& d1,
                                 const std::string& d2) {
  bool answer = same_name(d1, d2);
  if (!answer) {
    auto r1 = resolve(d1);
    auto r2 = resolve(d2);
    answer = r1 && r2 && !r1->inflated && !r2->inflated && r1->cls == r2->cls;
  }
  log(QueryKind::synonym_interchangeable, {{"D1", d1}, {"D2", d2}}, ctx, yes_no(answer));
  return answer;
}

std::pair<std::string, std::string> MockOracle::subcategory_direction(
    const OracleContext& ctx, const std::string& d1, const std::string& d2) {
  std::pair<std::string, std::string> answer{d1, d2};
  if (!truth_subsumes(d1, d2) && truth_subsumes(d2, d1)) answer = {d2, d1};
  log(QueryKind::synonym_direction, {{"D1", d1}, {"D2", d2}}, ctx,
      "[[" + answer.first + "]] is a subcategory of [[" + answer.second + "]].");
  return answer;
}

}  // namespace ontocrawl
