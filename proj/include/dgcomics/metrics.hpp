#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgcomics/graph.hpp"

namespace dgc {

enum class Metric { degree, total_link_weight, pagerank, eigenvector_centrality };
Metric parse_metric(std::string_view s);
std::string_view to_string(Metric m);

// One value per time index; nullopt where the node is absent at t.
using MetricSeries = std::vector<std::optional<double>>;

MetricSeries node_metric_series(const DynamicGraph& dg, std::string_view node, Metric metric);

// Whole-graph evaluations, keyed by node id.
std::map<std::string, double> degree(const Graph& g);
std::map<std::string, double> total_link_weight(const Graph& g);
// Weighted PageRank, damping 0.85, dangling mass spread uniformly; stops at L1 change < 1e-9 or 200 rounds.
std::map<std::string, double> pagerank(const Graph& g);
// Power iteration on (A + I); A symmetric for undirected graphs, in-link weights for directed.
// The identity shift keeps bipartite graphs from oscillating without moving the eigenvector. L2-normalised.
std::map<std::string, double> eigenvector_centrality(const Graph& g);

}  // namespace dgc
