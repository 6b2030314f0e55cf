#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dgcomics/graph.hpp"

namespace dgc {

enum class Exec { serial, parallel };

// Ruzicka (weighted Jaccard): sum(min) / sum(max) over the union of keys.
// Two all-zero vectors (including two empty ones) score 1.
double ruzicka(const AttributeVector& x, const AttributeVector& y);
// Dense form; vectors must have equal length. Throws ValidationError on negative entries.
double ruzicka(std::span<const double> x, std::span<const double> y);

struct DistanceConfig {
  // Relative weight of a node against a link in the element union.
  double node_weight = 1.0;
};

enum class ElementStatus { common, only_left, only_right };

struct ElementSimilarity {
  ElementKey key;
  double similarity = 0.0;
  ElementStatus status = ElementStatus::common;
};

struct GraphDistanceReport {
  double distance = 0.0;
  std::vector<ElementSimilarity> per_element;  // nodes first, then links, key order
  std::size_t element_union_size = 0;
};

// distance = 1 - (sum of Ruzicka over common elements) / |node union + link union|.
// One-sided elements contribute 0; two empty graphs are at distance 0.
double graph_distance(const Graph& a, const Graph& b, const DistanceConfig& cfg = {});
GraphDistanceReport graph_distance_report(const Graph& a, const Graph& b, const DistanceConfig& cfg = {});
inline double graph_distance(const SnapshotGroup& a, const SnapshotGroup& b, const DistanceConfig& cfg = {}) {
  return graph_distance(a.graph, b.graph, cfg);
}

// Entry t is the ego-network distance of `node` between snapshots t and t+1.
std::vector<double> consecutive_dissimilarity(const DynamicGraph& dg, std::string_view node, EgoLevel level,
                                              const DistanceConfig& cfg = {}, Exec exec = Exec::parallel);

}  // namespace dgc
