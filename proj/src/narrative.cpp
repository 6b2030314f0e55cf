#include "dgcomics/narrative.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"
#include "dgcomics/metrics.hpp"

namespace dgc {

std::vector<CharacterScore> rank_characters(const Graph* child_before, const Graph& child_after, EgoLevel level, int k,
                                            const CharacterOptions& opts) {
  if (k < 1) throw ValidationError("main character count must be >= 1");
  Graph whole = child_before ? union_graph(*child_before, child_after, opts.agg) : child_after;
  const auto weights = total_link_weight(whole);

  std::vector<std::string> ids;
  ids.reserve(whole.nodes().size());
  for (const auto& [id, node] : whole.nodes()) ids.push_back(id);

  std::vector<double> scores(ids.size(), 0.0);
  if (child_before) scores = kernels::ego_change_scores(ids, *child_before, child_after, level, opts.distance, opts.exec);

  std::vector<CharacterScore> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out.push_back({ids[i], scores[i], weights.at(ids[i])});
  std::sort(out.begin(), out.end(), [](const CharacterScore& a, const CharacterScore& b) {
    if (a.change_score != b.change_score) return a.change_score > b.change_score;
    if (a.total_link_weight != b.total_link_weight) return a.total_link_weight > b.total_link_weight;
    return a.id < b.id;
  });
  if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
  return out;
}

std::vector<CharacterScore> main_characters(const ClusterRef& cluster, const DynamicGraph& dg, EgoLevel level, int k,
                                            const CharacterOptions& opts) {
  if (!cluster.children) {
    const auto g = group_for_span(dg, cluster.span, opts.agg);
    return rank_characters(nullptr, g.graph, level, k, opts);
  }
  const auto before = group_for_span(dg, cluster.children->first, opts.agg);
  const auto after = group_for_span(dg, cluster.children->second, opts.agg);
  return rank_characters(&before.graph, after.graph, level, k, opts);
}

namespace {

std::size_t ceil_share(double percent, std::size_t count) {
  // Guard against 15% of 20 landing a hair above 3.
  const double share = percent * static_cast<double>(count) / 100.0;
  return std::min(count, static_cast<std::size_t>(std::ceil(share - 1e-9)));
}

}  // namespace

Supporters supporting_characters(const Graph& g, const std::set<std::string>& mains, double top_percent,
                                 double highlight_percent) {
  if (!(top_percent > 0.0 && top_percent <= 100.0)) {
    throw ValidationError(fmt::format("top percent {} outside (0,100]", top_percent));
  }
  if (!(highlight_percent >= 0.0 && highlight_percent <= top_percent)) {
    throw ValidationError(fmt::format("highlight percent {} outside [0,{}]", highlight_percent, top_percent));
  }
  std::map<std::string, double> to_mains;
  for (const auto& [key, link] : g.links()) {
    const bool s = mains.count(key.source) > 0;
    const bool t = mains.count(key.target) > 0;
    if (s && !t) to_mains[key.target] += link.weight();
    if (t && !s) to_mains[key.source] += link.weight();
  }
  Supporters out;
  out.ranked.assign(to_mains.begin(), to_mains.end());
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t n = out.ranked.size();
  const std::size_t visible = ceil_share(top_percent, n);
  const std::size_t highlighted = ceil_share(highlight_percent, n);
  for (const auto& m : mains) {
    if (g.has_node(m)) out.visible.insert(m);
  }
  for (std::size_t i = 0; i < visible; ++i) out.visible.insert(out.ranked[i].first);
  for (std::size_t i = 0; i < highlighted; ++i) out.highlighted.insert(out.ranked[i].first);
  return out;
}

}  // namespace dgc
