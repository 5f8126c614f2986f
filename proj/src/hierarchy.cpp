#include "ontocrawl/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"

namespace ontocrawl {

namespace {

constexpr int kHierarchyVersion = 1;

std::string describe_id(ConceptId id) {
  std::ostringstream os;
  os << id;
  return os.str();
}

}  // namespace

ConceptHierarchy::ConceptHierarchy(std::string_view seed_name) {
  if (is_blank(seed_name)) {
    throw InvalidInputError("seed concept name must not be empty");
  }
  seed_ = add_concept(seed_name);
  slots_[0].data.depth = 0;
}

bool ConceptHierarchy::contains(ConceptId id) const noexcept {
  return id.value < slots_.size() && slots_[id.value].alive;
}

ConceptHierarchy::Slot& ConceptHierarchy::slot(ConceptId id) {
  if (!contains(id)) throw NotFoundError("unknown concept " + describe_id(id));
  return slots_[id.value];
}

const ConceptHierarchy::Slot& ConceptHierarchy::slot(ConceptId id) const {
  if (!contains(id)) throw NotFoundError("unknown concept " + describe_id(id));
  return slots_[id.value];
}

const Concept& ConceptHierarchy::concept_at(ConceptId id) const {
  return slot(id).data;
}

std::vector<ConceptId> ConceptHierarchy::ids() const {
  std::vector<ConceptId> out;
  out.reserve(live_count_);
  for (const auto& s : slots_) {
    if (s.alive) out.push_back(s.data.id);
  }
  return out;
}

std::optional<ConceptId> ConceptHierarchy::find(std::string_view name) const {
  auto it = name_index_.find(normalize_name(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

void ConceptHierarchy::ensure_capacity(std::size_t n) {
  if (n <= capacity_) return;
  std::size_t cap = std::max<std::size_t>(16, capacity_);
  while (cap < n) cap *= 2;
  for (auto& s : slots_) {
    s.up.resize(cap);
    s.down.resize(cap);
  }
  capacity_ = cap;
}

void ConceptHierarchy::index_name(std::string_view name, ConceptId id) {
  if (is_blank(name)) throw InvalidInputError("concept name must not be empty");
  auto key = normalize_name(name);
  if (name_index_.contains(key)) {
    throw InvalidInputError("concept name already in use: " + std::string(name));
  }
  name_index_.emplace(std::move(key), id);
}

ConceptId ConceptHierarchy::add_concept(std::string_view name,
                                        std::optional<std::string> description) {
  if (slots_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InternalError("concept id space exhausted");
  }
  const ConceptId id{static_cast<std::uint32_t>(slots_.size())};
  index_name(name, id);
  ensure_capacity(slots_.size() + 1);

  Slot s;
  s.data.id = id;
  s.data.canonical_name = trim(name);
  s.data.description = std::move(description);
  s.alive = true;
  s.up.resize(capacity_);
  s.down.resize(capacity_);
  s.up.set(id.value);
  s.down.set(id.value);
  slots_.push_back(std::move(s));
  ++live_count_;
  return id;
}

void ConceptHierarchy::set_description(ConceptId id, std::string description) {
  slot(id).data.description = std::move(description);
}

void ConceptHierarchy::mark_explored(ConceptId id, bool explored) {
  slot(id).data.explored = explored;
}

void ConceptHierarchy::add_synonym_name(ConceptId id, std::string_view name) {
  auto& s = slot(id);
  index_name(name, id);
  s.data.synonym_names.push_back(trim(name));
}

bool ConceptHierarchy::is_subsumed(ConceptId child, ConceptId parent) const {
  const auto& c = slot(child);
  slot(parent);
  return c.up.test(parent.value);
}

std::vector<std::string> ConceptHierarchy::chain_between(ConceptId from,
                                                         ConceptId to) const {
  // Breadth-first walk upwards from `from`, only through concepts below `to`.
  std::map<ConceptId, ConceptId> came_from;
  std::deque<ConceptId> queue{from};
  came_from.emplace(from, from);
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (auto p : slots_[cur.value].parents) {
      if (!slots_[p.value].up.test(to.value) || came_from.contains(p)) continue;
      came_from.emplace(p, cur);
      queue.push_back(p);
    }
  }
  std::vector<std::string> path;
  if (!came_from.contains(to)) return path;
  for (auto cur = to;; cur = came_from.at(cur)) {
    path.push_back(slots_[cur.value].data.canonical_name);
    if (cur == from) break;
  }
  // Listed from the ancestor end down to `from`.
  return path;
}

bool ConceptHierarchy::add_subsumption(ConceptId child, ConceptId parent) {
  auto& c = slot(child);
  auto& p = slot(parent);
  if (child == parent) return false;
  if (child == seed_) {
    throw InvalidInputError("the seed concept cannot be placed below " +
                            p.data.canonical_name);
  }
  if (c.up.test(parent.value)) return false;
  if (p.up.test(child.value)) {
    auto chain = chain_between(parent, child);
    throw CycleError("adding " + c.data.canonical_name + " below " +
                         p.data.canonical_name + " would close a cycle",
                     std::move(chain));
  }

  const auto below = c.down;  // everything ⊑ child
  const auto above = p.up;    // everything parent ⊑
  for (auto x = below.find_first(); x != below.npos; x = below.find_next(x)) {
    slots_[x].up |= above;
  }
  for (auto y = above.find_first(); y != above.npos; y = above.find_next(y)) {
    slots_[y].down |= below;
  }

  // Any direct edge from below `child` to above `parent` is now implied.
  for (auto x = below.find_first(); x != below.npos; x = below.find_next(x)) {
    auto& xs = slots_[x];
    for (auto it = xs.parents.begin(); it != xs.parents.end();) {
      if (above.test(it->value)) {
        slots_[it->value].children.erase(xs.data.id);
        it = xs.parents.erase(it);
        --edge_count_;
      } else {
        ++it;
      }
    }
  }

  c.parents.insert(parent);
  p.children.insert(child);
  ++edge_count_;
  recompute_depths();
  return true;
}

ConceptId ConceptHierarchy::merge_synonyms(ConceptId a, ConceptId b) {
  slot(a);
  slot(b);
  if (a == b) throw InvalidInputError("cannot merge a concept with itself");
  // The seed always survives; otherwise the earlier discovery does.
  const ConceptId keep = (a == seed_ || b == seed_) ? seed_ : std::min(a, b);
  const ConceptId drop = keep == a ? b : a;

  // Identifying the two is only sound when nothing sits strictly between them.
  for (auto [lo, hi] : {std::pair{keep, drop}, std::pair{drop, keep}}) {
    if (!slots_[lo.value].up.test(hi.value)) continue;
    auto between = slots_[lo.value].up & slots_[hi.value].down;
    between.reset(lo.value);
    between.reset(hi.value);
    if (between.any()) {
      ConceptId mid{static_cast<std::uint32_t>(between.find_first())};
      auto chain = chain_between(lo, mid);
      auto rest = chain_between(mid, hi);
      rest.pop_back();
      rest.insert(rest.end(), chain.begin(), chain.end());
      throw CycleError("merging " + name_of(keep) + " and " + name_of(drop) +
                           " would collapse " + name_of(mid),
                       std::move(rest));
    }
  }

  auto& k = slots_[keep.value];
  auto& d = slots_[drop.value];

  std::vector<std::string> moved{d.data.canonical_name};
  moved.insert(moved.end(), d.data.synonym_names.begin(),
               d.data.synonym_names.end());
  for (const auto& n : moved) {
    name_index_[normalize_name(n)] = keep;
    k.data.synonym_names.push_back(n);
  }
  if (!k.data.description && d.data.description) {
    k.data.description = d.data.description;
  }

  for (auto p : d.parents) {
    slots_[p.value].children.erase(drop);
    if (p != keep) {
      k.parents.insert(p);
      slots_[p.value].children.insert(keep);
    }
  }
  for (auto ch : d.children) {
    slots_[ch.value].parents.erase(drop);
    if (ch != keep) {
      k.children.insert(ch);
      slots_[ch.value].parents.insert(keep);
    }
  }
  k.parents.erase(drop);
  k.children.erase(drop);

  d.parents.clear();
  d.children.clear();
  d.alive = false;
  d.up.reset();
  d.down.reset();
  --live_count_;

  rebuild_closure();
  reduce_all();
  recompute_depths();
  return keep;
}

std::size_t ConceptHierarchy::depth_of(ConceptId id) const {
  const auto& s = slot(id);
  if (!s.data.depth) {
    throw InternalError("concept " + s.data.canonical_name +
                        " is not connected to the seed");
  }
  return *s.data.depth;
}

std::optional<ConceptId> ConceptHierarchy::next_unexplored(
    std::optional<std::size_t> exploration_depth) const {
  std::optional<ConceptId> best;
  std::size_t best_depth = std::numeric_limits<std::size_t>::max();
  for (const auto& s : slots_) {
    if (!s.alive || s.data.explored || !s.data.depth) continue;
    const auto d = *s.data.depth;
    if (exploration_depth && d >= *exploration_depth) continue;
    if (d < best_depth) {
      best_depth = d;
      best = s.data.id;
    }
  }
  return best;
}

const std::set<ConceptId>& ConceptHierarchy::parents(ConceptId id) const {
  return slot(id).parents;
}

const std::set<ConceptId>& ConceptHierarchy::children(ConceptId id) const {
  return slot(id).children;
}

std::vector<ConceptId> ConceptHierarchy::ancestors(ConceptId id) const {
  const auto& bits = slot(id).up;
  std::vector<ConceptId> out;
  for (auto x = bits.find_first(); x != bits.npos; x = bits.find_next(x)) {
    if (x != id.value) out.push_back(ConceptId{static_cast<std::uint32_t>(x)});
  }
  return out;
}

std::vector<ConceptId> ConceptHierarchy::descendants(ConceptId id) const {
  const auto& bits = slot(id).down;
  std::vector<ConceptId> out;
  for (auto x = bits.find_first(); x != bits.npos; x = bits.find_next(x)) {
    if (x != id.value) out.push_back(ConceptId{static_cast<std::uint32_t>(x)});
  }
  return out;
}

std::vector<DirectEdge> ConceptHierarchy::direct_edges() const {
  std::vector<DirectEdge> out;
  out.reserve(edge_count_);
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    for (auto p : s.parents) out.emplace_back(s.data.id, p);
  }
  return out;
}

void ConceptHierarchy::rebuild_closure() {
  // Kahn's algorithm from the top: a concept is ready once all of its parents
  // have their closure rows.
  std::vector<std::size_t> pending(slots_.size(), 0);
  std::deque<ConceptId> ready;
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    pending[s.data.id.value] = s.parents.size();
    if (s.parents.empty()) ready.push_back(s.data.id);
  }
  for (auto& s : slots_) {
    s.up.reset();
    s.down.reset();
  }
  std::size_t done = 0;
  while (!ready.empty()) {
    auto id = ready.front();
    ready.pop_front();
    auto& s = slots_[id.value];
    s.up.set(id.value);
    for (auto p : s.parents) s.up |= slots_[p.value].up;
    ++done;
    for (auto ch : s.children) {
      if (--pending[ch.value] == 0) ready.push_back(ch);
    }
  }
  if (done != live_count_) {
    throw InternalError("direct edges contain a cycle");
  }
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    for (auto y = s.up.find_first(); y != s.up.npos; y = s.up.find_next(y)) {
      slots_[y].down.set(s.data.id.value);
    }
  }
}

void ConceptHierarchy::reduce_all() {
  edge_count_ = 0;
  for (auto& s : slots_) {
    if (!s.alive) continue;
    std::vector<ConceptId> implied;
    for (auto y : s.parents) {
      for (auto z : s.parents) {
        if (z != y && slots_[z.value].up.test(y.value)) {
          implied.push_back(y);
          break;
        }
      }
    }
    for (auto y : implied) {
      s.parents.erase(y);
      slots_[y.value].children.erase(s.data.id);
    }
    edge_count_ += s.parents.size();
  }
}

void ConceptHierarchy::recompute_depths() {
  for (auto& s : slots_) s.data.depth.reset();
  std::deque<ConceptId> queue{seed_};
  slots_[seed_.value].data.depth = 0;
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    const auto next = *slots_[id.value].data.depth + 1;
    for (auto ch : slots_[id.value].children) {
      auto& d = slots_[ch.value].data.depth;
      if (!d) {
        d = next;
        queue.push_back(ch);
      }
    }
  }
}

void ConceptHierarchy::verify() const {
  ConceptHierarchy fresh = *this;
  fresh.rebuild_closure();
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    const auto& f = fresh.slots_[s.data.id.value];
    if (f.up != s.up || f.down != s.down) {
      throw InternalError("closure mismatch at " + s.data.canonical_name);
    }
  }
  fresh.reduce_all();
  if (fresh.edge_count_ != edge_count_) {
    throw InternalError("direct edges are not a transitive reduction");
  }
  fresh.recompute_depths();
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    if (fresh.slots_[s.data.id.value].data.depth != s.data.depth) {
      throw InternalError("depth mismatch at " + s.data.canonical_name);
    }
    if (s.data.id != seed_ && !s.up.test(seed_.value)) {
      throw InternalError(s.data.canonical_name + " does not reach the seed");
    }
  }
}

nlohmann::json ConceptHierarchy::to_json() const {
  nlohmann::json concepts = nlohmann::json::array();
  for (const auto& s : slots_) {
    if (!s.alive) continue;
    const auto& c = s.data;
    concepts.push_back({
        {"id", c.id.value},
        {"canonical_name", c.canonical_name},
        {"synonyms", c.synonym_names},
        {"description", c.description ? nlohmann::json(*c.description)
                                      : nlohmann::json(nullptr)},
        {"explored", c.explored},
        {"depth", c.depth ? nlohmann::json(*c.depth) : nlohmann::json(nullptr)},
    });
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [child, parent] : direct_edges()) {
    edges.push_back({child.value, parent.value});
  }
  return {{"version", kHierarchyVersion},
          {"seed", seed_.value},
          {"concepts", std::move(concepts)},
          {"direct_edges", std::move(edges)}};
}

ConceptHierarchy ConceptHierarchy::from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("version", 0) != kHierarchyVersion) {
      throw InvalidInputError("unsupported hierarchy version");
    }
    ConceptHierarchy h;
    std::uint32_t max_id = 0;
    for (const auto& c : doc.at("concepts")) {
      max_id = std::max(max_id, c.at("id").get<std::uint32_t>());
    }
    h.slots_.resize(static_cast<std::size_t>(max_id) + 1);
    h.ensure_capacity(h.slots_.size());
    for (std::size_t i = 0; i < h.slots_.size(); ++i) {
      h.slots_[i].data.id = ConceptId{static_cast<std::uint32_t>(i)};
    }
    for (const auto& c : doc.at("concepts")) {
      const ConceptId id{c.at("id").get<std::uint32_t>()};
      auto& s = h.slots_[id.value];
      if (s.alive) throw InvalidInputError("duplicate concept id");
      s.alive = true;
      ++h.live_count_;
      s.data.canonical_name = c.at("canonical_name").get<std::string>();
      h.index_name(s.data.canonical_name, id);
      for (const auto& syn : c.at("synonyms")) {
        s.data.synonym_names.push_back(syn.get<std::string>());
        h.index_name(s.data.synonym_names.back(), id);
      }
      if (!c.at("description").is_null()) {
        s.data.description = c.at("description").get<std::string>();
      }
      s.data.explored = c.at("explored").get<bool>();
    }
    h.seed_ = ConceptId{doc.at("seed").get<std::uint32_t>()};
    if (!h.contains(h.seed_)) throw InvalidInputError("seed id is not a concept");
    for (const auto& e : doc.at("direct_edges")) {
      if (e.size() != 2) throw InvalidInputError("edge must be [child, parent]");
      const ConceptId child{e[0].get<std::uint32_t>()};
      const ConceptId parent{e[1].get<std::uint32_t>()};
      if (!h.contains(child) || !h.contains(parent) || child == parent) {
        throw InvalidInputError("edge references an unknown concept");
      }
      h.slots_[child.value].parents.insert(parent);
      h.slots_[parent.value].children.insert(child);
    }
    if (!h.slots_[h.seed_.value].parents.empty()) {
      throw InvalidInputError("the seed concept has a parent");
    }
    try {
      h.rebuild_closure();
    } catch (const InternalError&) {
      throw InvalidInputError("hierarchy edges contain a cycle");
    }
    h.reduce_all();
    h.recompute_depths();
    for (const auto& s : h.slots_) {
      if (s.alive && !s.data.depth) {
        throw InvalidInputError(s.data.canonical_name +
                                " is not connected to the seed");
      }
    }
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed hierarchy document: ") +
                            e.what());
  }
}

}  // namespace ontocrawl
