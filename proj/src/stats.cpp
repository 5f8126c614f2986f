#include "ontocrawl/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <vector>

#include "ontocrawl/crawler.hpp"
#include "ontocrawl/errors.hpp"

namespace ontocrawl {

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      // First column left-aligned, numbers right-aligned.
      if (i == 0) {
        out << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
      } else {
        out << std::right << std::setw(static_cast<int>(width[i])) << cells[i];
      }
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

const std::vector<std::string> kSummaryHeader{
    "seed", "co_d", "ft", "n_C", "n_D", "n_sub", "n_sub'", "p/C", "cost($)", "<=co_d", ">co_d"};

std::vector<std::string> summary_cells(const CrawlStats& s) {
  return {s.seed,
          s.exploration_depth ? std::to_string(*s.exploration_depth) : "none",
          std::to_string(s.ft),
          std::to_string(s.n_C),
          std::to_string(s.n_D),
          std::to_string(s.n_sub),
          std::to_string(s.n_sub_ins),
          fixed(s.prompts_per_concept, 2),
          fixed(s.cost_dollars, 2),
          std::to_string(s.concepts_at_or_below_cutoff),
          std::to_string(s.concepts_above_cutoff)};
}

std::size_t count_at(const std::map<std::size_t, std::size_t>& m, std::size_t k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

nlohmann::json histogram_json(const std::map<std::size_t, std::size_t>& m) {
  nlohmann::json out = nlohmann::json::object();
  for (auto [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

std::map<std::size_t, std::size_t> histogram_from(const nlohmann::json& doc) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& [k, v] : doc.items()) out[std::stoul(k)] = v.get<std::size_t>();
  return out;
}

}  // namespace

nlohmann::json CrawlStats::to_json() const {
  return {
      {"seed", seed},
      {"exploration_depth",
       exploration_depth ? nlohmann::json(*exploration_depth) : nlohmann::json("none")},
      {"ft", ft},
      {"n_C", n_C},
      {"n_D", n_D},
      {"n_sub", n_sub},
      {"n_sub_ins", n_sub_ins},
      {"requests", requests},
      {"prompts_per_concept", prompts_per_concept},
      {"cost_dollars", cost_dollars},
      {"concepts_at_or_below_cutoff", concepts_at_or_below_cutoff},
      {"concepts_above_cutoff", concepts_above_cutoff},
      {"depth_histogram", histogram_json(depth_histogram)},
      {"outdegree_histogram", histogram_json(outdegree_histogram)},
      {"max_outdegree", max_outdegree},
      {"avg_outdegree", avg_outdegree},
      {"probes_issued", probes_issued},
      {"probes_saved", probes_saved},
  };
}

CrawlStats CrawlStats::from_json(const nlohmann::json& doc) {
  try {
    CrawlStats s;
    s.seed = doc.at("seed").get<std::string>();
    const auto& depth = doc.at("exploration_depth");
    if (depth.is_number_integer()) s.exploration_depth = depth.get<int>();
    s.ft = doc.at("ft").get<int>();
    s.n_C = doc.at("n_C").get<std::size_t>();
    s.n_D = doc.at("n_D").get<std::size_t>();
    s.n_sub = doc.at("n_sub").get<std::size_t>();
    s.n_sub_ins = doc.at("n_sub_ins").get<std::size_t>();
    s.requests = doc.value("requests", std::size_t{0});
    s.prompts_per_concept = doc.at("prompts_per_concept").get<double>();
    s.cost_dollars = doc.at("cost_dollars").get<double>();
    s.concepts_at_or_below_cutoff = doc.at("concepts_at_or_below_cutoff").get<std::size_t>();
    s.concepts_above_cutoff = doc.at("concepts_above_cutoff").get<std::size_t>();
    s.depth_histogram = histogram_from(doc.value("depth_histogram", nlohmann::json::object()));
    s.outdegree_histogram =
        histogram_from(doc.value("outdegree_histogram", nlohmann::json::object()));
    s.max_outdegree = doc.value("max_outdegree", std::size_t{0});
    s.avg_outdegree = doc.value("avg_outdegree", 0.0);
    s.probes_issued = doc.value("probes_issued", std::size_t{0});
    s.probes_saved = doc.value("probes_saved", std::size_t{0});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed statistics: ") + e.what());
  }
}

CrawlStats compute_stats(const ConceptHierarchy& h, const LedgerSnapshot& ledger,
                         std::size_t n_rejected, const std::set<DirectEdge>& listed_edges,
                         std::optional<int> exploration_depth, int ft) {
  CrawlStats s;
  s.seed = h.name_of(h.seed());
  s.exploration_depth = exploration_depth;
  s.ft = ft;
  s.n_C = h.size();
  s.n_D = n_rejected;
  s.n_sub = h.edge_count();
  for (const auto& e : h.direct_edges()) {
    if (!listed_edges.contains(e)) ++s.n_sub_ins;
  }
  s.requests = ledger.requests;
  s.cost_dollars = ledger.dollars;
  s.prompts_per_concept =
      s.n_C ? static_cast<double>(ledger.requests) / static_cast<double>(s.n_C) : 0.0;
  for (auto id : h.ids()) {
    const auto depth = h.depth_of(id);
    ++s.depth_histogram[depth];
    if (!exploration_depth || depth <= static_cast<std::size_t>(*exploration_depth)) {
      ++s.concepts_at_or_below_cutoff;
    } else {
      ++s.concepts_above_cutoff;
    }
    const auto out = h.children(id).size();
    ++s.outdegree_histogram[out];
    s.max_outdegree = std::max(s.max_outdegree, out);
  }
  s.avg_outdegree =
      s.n_C ? static_cast<double>(s.n_sub) / static_cast<double>(s.n_C) : 0.0;
  return s;
}

CrawlStats compute_stats(const CrawlConfig& config, const CrawlState& state) {
  auto s = compute_stats(state.hierarchy, state.ledger, state.n_rejected, state.listed_edges,
                         config.exploration_depth, config.ft);
  s.probes_issued = state.probes_issued;
  s.probes_saved = state.probes_saved;
  return s;
}

std::string render_summary(const std::vector<CrawlStats>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& s : rows) cells.push_back(summary_cells(s));
  return table(kSummaryHeader, cells);
}

std::string render_depth_table(const CrawlStats& s) {
  std::vector<std::string> header{"seed"};
  std::vector<std::string> row{s.seed};
  for (std::size_t d = 1; d <= 9; ++d) {
    header.push_back(std::to_string(d));
    std::size_t n = count_at(s.depth_histogram, d);
    if (d == 9) {
      for (const auto& [depth, count] : s.depth_histogram) {
        if (depth > 9) n += count;
      }
    }
    row.push_back(std::to_string(n));
  }
  return table(header, {row});
}

std::string render_outdegree_table(const CrawlStats& s) {
  std::vector<std::string> header{"seed"};
  std::vector<std::string> row{s.seed};
  for (std::size_t o = 0; o <= 9; ++o) {
    header.push_back(std::to_string(o));
    row.push_back(std::to_string(count_at(s.outdegree_histogram, o)));
  }
  std::size_t many = 0;
  for (const auto& [o, count] : s.outdegree_histogram) {
    if (o >= 10) many += count;
  }
  header.insert(header.end(), {"10+", "max o", "avg o"});
  row.insert(row.end(),
             {std::to_string(many), std::to_string(s.max_outdegree), fixed(s.avg_outdegree, 2)});
  return table(header, {row});
}

std::string render_stats(const CrawlStats& s) {
  std::ostringstream out;
  out << render_summary({s}) << '\n'
      << "Concepts per depth\n"
      << render_depth_table(s) << '\n'
      << "Concepts per outdegree\n"
      << render_outdegree_table(s);
  return out.str();
}

}  // namespace ontocrawl
