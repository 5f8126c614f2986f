#include "ontocrawl/insertion.hpp"

#include <algorithm>
#include <map>

#include <spdlog/spdlog.h>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"
#include "ontocrawl/parallel.hpp"

namespace ontocrawl {

namespace {

enum class Mark { unknown, yes, no };

}  // namespace

Inserter::Inserter(Oracle& oracle, ConceptHierarchy& hierarchy, OracleContext base,
                   InsertionOptions options)
    : oracle_(oracle), h_(hierarchy), base_(std::move(base)), options_(options) {
  if (base_.seed_name.empty()) base_.seed_name = h_.name_of(h_.seed());
}

void Inserter::describe_into(OracleContext& ctx, ConceptId id) const {
  const auto& c = h_.concept_at(id);
  if (c.description && !ctx.description_for(c.canonical_name)) {
    ctx.add_description(c.canonical_name, *c.description);
  }
}

OracleContext Inserter::context(const std::string& name, const std::string* description,
                                ConceptId entry, const char* phase) const {
  OracleContext ctx = base_;
  ctx.phase = phase;
  ctx.parent_name = h_.name_of(entry);
  if (description && !description->empty()) ctx.add_description(name, *description);
  describe_into(ctx, h_.seed());
  describe_into(ctx, entry);
  return ctx;
}

std::vector<bool> Inserter::probe(const std::vector<ConceptId>& batch,
                                  const OracleContext& ctx, const std::string& name,
                                  bool name_below, std::size_t& failed) {
  std::atomic<std::size_t> failures{0};
  auto answers = parallel_map(batch, options_.max_parallel_probes, [&](ConceptId d) {
    OracleContext local = ctx;
    describe_into(local, d);
    const auto& other = h_.name_of(d);
    try {
      return name_below ? oracle_.is_subcategory_of(local, name, other)
                        : oracle_.is_subcategory_of(local, other, name);
    } catch (const Error& e) {
      spdlog::warn("{} probe {} / {} failed, counted as no: {}", local.phase, name, other,
                   e.what());
      ++failures;
      return false;
    }
  });
  failed += failures.load();
  return answers;
}

SearchResult Inserter::top_search(const std::string& name, const std::string* description,
                                  ConceptId entry) {
  SearchResult result;
  const auto ctx = context(name, description, entry, "top");
  std::map<ConceptId, Mark> mark;
  mark[entry] = Mark::yes;
  for (auto a : h_.ancestors(entry)) mark[a] = Mark::yes;

  for (;;) {
    // Children of positive concepts: ready once every parent is positive,
    // settled without a probe once any parent is negative.
    std::set<ConceptId> ready;
    std::vector<ConceptId> pruned;
    for (const auto& [id, m] : mark) {
      if (m != Mark::yes) continue;
      for (auto child : h_.children(id)) {
        if (mark.contains(child)) continue;
        bool all_yes = true;
        bool any_no = false;
        for (auto p : h_.parents(child)) {
          auto it = mark.find(p);
          const auto pm = it == mark.end() ? Mark::unknown : it->second;
          all_yes = all_yes && pm == Mark::yes;
          any_no = any_no || pm == Mark::no;
        }
        if (any_no) {
          pruned.push_back(child);
        } else if (all_yes) {
          ready.insert(child);
        }
      }
    }
    for (auto id : pruned) mark[id] = Mark::no;
    if (ready.empty()) {
      if (pruned.empty()) break;
      continue;
    }
    const std::vector<ConceptId> batch(ready.begin(), ready.end());
    const auto answers = probe(batch, ctx, name, true, result.probes_failed);
    result.probes_issued += batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      mark[batch[i]] = answers[i] ? Mark::yes : Mark::no;
    }
  }

  for (const auto& [id, m] : mark) {
    if (m != Mark::yes) continue;
    const bool has_yes_child = std::any_of(
        h_.children(id).begin(), h_.children(id).end(), [&](ConceptId ch) {
          auto it = mark.find(ch);
          return it != mark.end() && it->second == Mark::yes;
        });
    if (!has_yes_child) result.found.insert(id);
  }
  return result;
}

SearchResult Inserter::bottom_search(const std::string& name,
                                     const std::string* description, ConceptId entry,
                                     const std::set<ConceptId>& parents) {
  SearchResult result;
  if (parents.empty()) return result;
  const auto ctx = context(name, description, entry, "bottom");

  // Concepts below (or equal to) every found superconcept.
  std::set<ConceptId> scope;
  bool first = true;
  for (auto p : parents) {
    auto below = h_.descendants(p);
    below.push_back(p);
    std::set<ConceptId> s(below.begin(), below.end());
    if (first) {
      scope = std::move(s);
      first = false;
    } else {
      std::set<ConceptId> kept;
      std::set_intersection(scope.begin(), scope.end(), s.begin(), s.end(),
                            std::inserter(kept, kept.end()));
      scope = std::move(kept);
    }
  }
  scope.erase(h_.seed());

  std::map<ConceptId, Mark> mark;
  for (;;) {
    std::vector<ConceptId> batch;
    std::vector<ConceptId> pruned;
    for (auto id : scope) {
      if (mark.contains(id)) continue;
      bool all_yes = true;
      bool any_no = false;
      for (auto ch : h_.children(id)) {
        auto it = mark.find(ch);
        const auto cm = it == mark.end() ? Mark::unknown : it->second;
        all_yes = all_yes && cm == Mark::yes;
        any_no = any_no || cm == Mark::no;
      }
      if (any_no) {
        pruned.push_back(id);
      } else if (all_yes) {
        batch.push_back(id);
      }
    }
    for (auto id : pruned) mark[id] = Mark::no;
    if (batch.empty()) {
      if (pruned.empty()) break;
      continue;
    }
    const auto answers = probe(batch, ctx, name, false, result.probes_failed);
    result.probes_issued += batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      mark[batch[i]] = answers[i] ? Mark::yes : Mark::no;
    }
  }

  for (const auto& [id, m] : mark) {
    if (m != Mark::yes) continue;
    const bool has_yes_parent = std::any_of(
        h_.parents(id).begin(), h_.parents(id).end(), [&](ConceptId p) {
          auto it = mark.find(p);
          return it != mark.end() && it->second == Mark::yes;
        });
    if (!has_yes_parent) result.found.insert(id);
  }
  return result;
}

Placement Inserter::insert(const std::string& name, std::optional<std::string> description,
                           ConceptId entry) {
  if (is_blank(name)) throw InvalidInputError("concept name is empty");
  if (!h_.contains(entry)) throw NotFoundError("unknown entry concept");
  if (h_.find(name)) {
    throw InvalidInputError("concept already present: " + name);
  }
  const std::string* desc = description ? &*description : nullptr;
  const std::size_t existing = h_.size();

  Placement placement;
  auto top = top_search(name, desc, entry);
  auto bottom = bottom_search(name, desc, entry, top.found);
  placement.parents = std::move(top.found);
  placement.children = std::move(bottom.found);
  placement.probes_issued = top.probes_issued + bottom.probes_issued;
  placement.probes_failed = top.probes_failed + bottom.probes_failed;
  placement.probes_saved =
      2 * existing > placement.probes_issued ? 2 * existing - placement.probes_issued : 0;

  std::vector<ConceptId> common;
  std::set_intersection(placement.parents.begin(), placement.parents.end(),
                        placement.children.begin(), placement.children.end(),
                        std::back_inserter(common));

  // Edges between the new concept and `d` turned down by the direction check;
  // true when `d` was the would-be child.
  std::vector<std::pair<ConceptId, bool>> refused;
  OracleContext ctx = context(name, desc, entry, "synonym");
  for (auto d : common) {
    describe_into(ctx, d);
    const auto& other = h_.name_of(d);
    bool same = false;
    try {
      same = oracle_.interchangeable(ctx, name, other);
    } catch (const Error& e) {
      spdlog::warn("synonym check {} / {} failed, counted as no: {}", name, other, e.what());
    }
    if (same) {
      placement.synonym_of = d;
      break;
    }
    std::optional<bool> name_is_sub;
    try {
      auto [sub, super] = oracle_.subcategory_direction(ctx, name, other);
      if (same_name(sub, name) && same_name(super, other)) {
        name_is_sub = true;
      } else if (same_name(sub, other) && same_name(super, name)) {
        name_is_sub = false;
      } else {
        throw ParseError("direction names neither " + name + " nor " + other);
      }
    } catch (const Error& e) {
      spdlog::warn("direction of {} / {} unresolved, keeping {} below {}: {}", name, other,
                   name, other, e.what());
      name_is_sub = true;
    }
    if (*name_is_sub) {
      placement.children.erase(d);
      refused.emplace_back(d, true);
    } else {
      placement.parents.erase(d);
      refused.emplace_back(d, false);
      if (placement.parents.empty()) {
        // The only superconcept turned out to be below; climb to its own.
        placement.parents = h_.parents(d);
      }
    }
  }

  if (placement.synonym_of) {
    const auto d = *placement.synonym_of;
    h_.add_synonym_name(d, name);
    if (desc && !h_.concept_at(d).description) h_.set_description(d, *desc);
    for (auto p : placement.parents) {
      if (p == d) continue;
      try {
        h_.add_subsumption(d, p);
      } catch (const Error& e) {
        spdlog::error("dropping {} below {}: {}", h_.name_of(d), h_.name_of(p), e.what());
        placement.dropped_edges.emplace_back(d, p);
      }
    }
    for (auto c : placement.children) {
      if (c == d) continue;
      try {
        h_.add_subsumption(c, d);
      } catch (const Error& e) {
        spdlog::error("dropping {} below {}: {}", h_.name_of(c), h_.name_of(d), e.what());
        placement.dropped_edges.emplace_back(c, d);
      }
    }
    placement.id = d;
    return placement;
  }

  const auto id = h_.add_concept(name, std::move(description));
  for (const auto& [d, d_below] : refused) {
    placement.dropped_edges.push_back(d_below ? DirectEdge{d, id} : DirectEdge{id, d});
  }
  placement.id = id;
  for (auto p : placement.parents) h_.add_subsumption(id, p);
  for (auto c : placement.children) {
    try {
      h_.add_subsumption(c, id);
    } catch (const CycleError& e) {
      spdlog::error("dropping {} below {}: {}", h_.name_of(c), name, e.what());
      placement.dropped_edges.emplace_back(c, id);
    }
  }
  return placement;
}

KnownEdgeResult Inserter::add_known_edge(ConceptId existing, ConceptId entry) {
  KnownEdgeResult result;
  if (existing == entry) return result;
  if (existing == h_.seed()) {
    spdlog::warn("{} lists the seed as a subconcept; ignored", h_.name_of(entry));
    return result;
  }
  try {
    result.added = h_.add_subsumption(existing, entry);
    return result;
  } catch (const CycleError& e) {
    OracleContext ctx = base_;
    ctx.phase = "synonym";
    describe_into(ctx, existing);
    describe_into(ctx, entry);
    bool same = false;
    try {
      same = oracle_.interchangeable(ctx, h_.name_of(existing), h_.name_of(entry));
    } catch (const Error& err) {
      spdlog::warn("synonym check failed, counted as no: {}", err.what());
    }
    if (!same) {
      spdlog::error("dropping {} below {}: {}", h_.name_of(existing), h_.name_of(entry),
                    e.what());
      return result;
    }
    try {
      const auto survivor = h_.merge_synonyms(existing, entry);
      result.merged_into = survivor;
      result.merged_away = survivor == existing ? entry : existing;
    } catch (const Error& err) {
      spdlog::error("cannot merge {} and {}: {}", h_.name_of(existing), h_.name_of(entry),
                    err.what());
    }
  }
  return result;
}

}  // namespace ontocrawl
