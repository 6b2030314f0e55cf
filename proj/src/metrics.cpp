#include "dgcomics/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"

namespace dgc {

Metric parse_metric(std::string_view s) {
  if (s == "degree") return Metric::degree;
  if (s == "total_link_weight" || s == "weight") return Metric::total_link_weight;
  if (s == "pagerank") return Metric::pagerank;
  if (s == "eigenvector_centrality" || s == "eigenvector") return Metric::eigenvector_centrality;
  throw ValidationError(
      fmt::format("unknown metric '{}' (expected degree|total_link_weight|pagerank|eigenvector_centrality)", s));
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::degree: return "degree";
    case Metric::total_link_weight: return "total_link_weight";
    case Metric::pagerank: return "pagerank";
    case Metric::eigenvector_centrality: return "eigenvector_centrality";
  }
  return "degree";
}

std::map<std::string, double> degree(const Graph& g) {
  std::map<std::string, double> out;
  for (const auto& [id, n] : g.nodes()) out[id] = 0.0;
  for (const auto& [key, link] : g.links()) {
    out[key.source] += 1.0;
    out[key.target] += 1.0;
  }
  return out;
}

std::map<std::string, double> total_link_weight(const Graph& g) {
  std::map<std::string, double> out;
  for (const auto& [id, n] : g.nodes()) out[id] = 0.0;
  for (const auto& [key, link] : g.links()) {
    out[key.source] += link.weight();
    out[key.target] += link.weight();
  }
  return out;
}

namespace {

struct Dense {
  std::vector<std::string> ids;
  std::map<std::string, std::size_t, std::less<>> index;
  // (from, to, weight); undirected links appear in both directions.
  std::vector<std::tuple<std::size_t, std::size_t, double>> arcs;
};

Dense densify(const Graph& g) {
  Dense d;
  for (const auto& [id, n] : g.nodes()) {
    d.index[id] = d.ids.size();
    d.ids.push_back(id);
  }
  for (const auto& [key, link] : g.links()) {
    const auto s = d.index[key.source];
    const auto t = d.index[key.target];
    d.arcs.emplace_back(s, t, link.weight());
    if (!g.directed()) d.arcs.emplace_back(t, s, link.weight());
  }
  return d;
}

std::map<std::string, double> to_map(const Dense& d, const std::vector<double>& v) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < d.ids.size(); ++i) out[d.ids[i]] = v[i];
  return out;
}

}  // namespace

std::map<std::string, double> pagerank(const Graph& g) {
  constexpr double damping = 0.85;
  constexpr double tolerance = 1e-9;
  constexpr int max_rounds = 200;

  const Dense d = densify(g);
  const std::size_t n = d.ids.size();
  if (n == 0) return {};
  std::vector<double> out_weight(n, 0.0);
  for (const auto& [s, t, w] : d.arcs) out_weight[s] += w;

  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int round = 0; round < max_rounds; ++round) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_weight[i] == 0.0) dangling += rank[i];
    }
    const double base = (1.0 - damping + damping * dangling) / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (const auto& [s, t, w] : d.arcs) next[t] += damping * rank[s] * w / out_weight[s];
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (change < tolerance) break;
  }
  return to_map(d, rank);
}

std::map<std::string, double> eigenvector_centrality(const Graph& g) {
  constexpr double tolerance = 1e-9;
  constexpr int max_rounds = 1000;

  const Dense d = densify(g);
  const std::size_t n = d.ids.size();
  if (n == 0) return {};
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int round = 0; round < max_rounds; ++round) {
    next = x;
    for (const auto& [s, t, w] : d.arcs) next[t] += w * x[s];
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      change += std::abs(next[i] - x[i]);
    }
    x.swap(next);
    if (change < tolerance) break;
  }
  return to_map(d, x);
}

MetricSeries node_metric_series(const DynamicGraph& dg, std::string_view node, Metric metric) {
  MetricSeries out;
  out.reserve(dg.snapshots.size());
  for (const auto& snap : dg.snapshots) {
    const Graph& g = snap.graph;
    if (!g.has_node(node)) {
      out.emplace_back(std::nullopt);
      continue;
    }
    std::map<std::string, double> values;
    switch (metric) {
      case Metric::degree: values = degree(g); break;
      case Metric::total_link_weight: values = total_link_weight(g); break;
      case Metric::pagerank: values = pagerank(g); break;
      case Metric::eigenvector_centrality: values = eigenvector_centrality(g); break;
    }
    out.emplace_back(values.at(std::string(node)));
  }
  return out;
}

}  // namespace dgc
