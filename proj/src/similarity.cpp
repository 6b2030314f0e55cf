#include "dgcomics/similarity.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"

namespace dgc {

double ruzicka(const AttributeVector& x, const AttributeVector& y) {
  double num = 0.0;
  double den = 0.0;
  auto xi = x.entries().begin();
  auto yi = y.entries().begin();
  const auto xe = x.entries().end();
  const auto ye = y.entries().end();
  while (xi != xe || yi != ye) {
    if (yi == ye || (xi != xe && xi->first < yi->first)) {
      den += xi->second;
      ++xi;
    } else if (xi == xe || yi->first < xi->first) {
      den += yi->second;
      ++yi;
    } else {
      num += std::min(xi->second, yi->second);
      den += std::max(xi->second, yi->second);
      ++xi;
      ++yi;
    }
  }
  return den == 0.0 ? 1.0 : num / den;
}

double ruzicka(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError(fmt::format("ruzicka: length mismatch {} vs {}", x.size(), y.size()));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || y[i] < 0.0) throw ValidationError(fmt::format("ruzicka: negative entry at index {}", i));
    num += std::min(x[i], y[i]);
    den += std::max(x[i], y[i]);
  }
  return den == 0.0 ? 1.0 : num / den;
}

namespace {

// Walks two sorted maps in lockstep, calling on_common / on_left / on_right.
template <class MapA, class MapB, class Common, class Left, class Right>
void merge_walk(const MapA& a, const MapB& b, Common&& on_common, Left&& on_left, Right&& on_right) {
  auto ai = a.begin();
  auto bi = b.begin();
  while (ai != a.end() || bi != b.end()) {
    if (bi == b.end() || (ai != a.end() && ai->first < bi->first)) {
      on_left(*ai);
      ++ai;
    } else if (ai == a.end() || bi->first < ai->first) {
      on_right(*bi);
      ++bi;
    } else {
      on_common(*ai, *bi);
      ++ai;
      ++bi;
    }
  }
}

}  // namespace

double graph_distance(const Graph& a, const Graph& b, const DistanceConfig& cfg) {
  double node_sim = 0.0;
  double link_sim = 0.0;
  std::size_t node_union = 0;
  std::size_t link_union = 0;
  merge_walk(
      a.nodes(), b.nodes(),
      [&](const auto& l, const auto& r) {
        ++node_union;
        node_sim += ruzicka(l.second.attrs, r.second.attrs);
      },
      [&](const auto&) { ++node_union; }, [&](const auto&) { ++node_union; });
  merge_walk(
      a.links(), b.links(),
      [&](const auto& l, const auto& r) {
        ++link_union;
        link_sim += ruzicka(l.second.attrs, r.second.attrs);
      },
      [&](const auto&) { ++link_union; }, [&](const auto&) { ++link_union; });
  const double size = cfg.node_weight * static_cast<double>(node_union) + static_cast<double>(link_union);
  if (size == 0.0) return 0.0;
  return 1.0 - (cfg.node_weight * node_sim + link_sim) / size;
}

GraphDistanceReport graph_distance_report(const Graph& a, const Graph& b, const DistanceConfig& cfg) {
  GraphDistanceReport report;
  auto common = [&](ElementKey key, const AttributeVector& x, const AttributeVector& y) {
    report.per_element.push_back({std::move(key), ruzicka(x, y), ElementStatus::common});
  };
  merge_walk(
      a.nodes(), b.nodes(), [&](const auto& l, const auto& r) { common(ElementKey::node(l.first), l.second.attrs, r.second.attrs); },
      [&](const auto& l) { report.per_element.push_back({ElementKey::node(l.first), 0.0, ElementStatus::only_left}); },
      [&](const auto& r) { report.per_element.push_back({ElementKey::node(r.first), 0.0, ElementStatus::only_right}); });
  merge_walk(
      a.links(), b.links(), [&](const auto& l, const auto& r) { common(ElementKey::link(l.first), l.second.attrs, r.second.attrs); },
      [&](const auto& l) { report.per_element.push_back({ElementKey::link(l.first), 0.0, ElementStatus::only_left}); },
      [&](const auto& r) { report.per_element.push_back({ElementKey::link(r.first), 0.0, ElementStatus::only_right}); });
  report.element_union_size = report.per_element.size();
  report.distance = graph_distance(a, b, cfg);
  return report;
}

std::vector<double> consecutive_dissimilarity(const DynamicGraph& dg, std::string_view node, EgoLevel level,
                                              const DistanceConfig& cfg, Exec exec) {
  const std::set<std::string> ego{std::string(node)};
  std::vector<Graph> egos;
  egos.reserve(dg.snapshots.size());
  for (const auto& s : dg.snapshots) egos.push_back(ego_network(s.graph, ego, level));
  std::vector<GraphPair> pairs;
  for (std::size_t t = 0; t + 1 < egos.size(); ++t) pairs.push_back({&egos[t], &egos[t + 1]});
  return kernels::batch_distances(pairs, cfg, exec);
}

}  // namespace dgc
