#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgcomics/graph.hpp"
#include "dgcomics/similarity.hpp"

namespace dgc {

// Whole graph, or every snapshot replaced by one node's ego network.
struct Scope {
  std::optional<std::string> ego;
  EgoLevel level = EgoLevel::one_and_half;

  static Scope whole() { return {}; }
  static Scope of_ego(std::string node, EgoLevel level) { return {std::move(node), level}; }
  // "whole" or "ego:<node>".
  static Scope parse(std::string_view s, EgoLevel level);
  std::string key() const;
};

// Ids 0..leaf_count-1 are leaves (snapshot indices); merge i has id leaf_count + i.
struct MergeNode {
  int id = 0;
  int left = 0;
  int right = 0;
  Span span;
  double raw = 0.0;     // distance between the two children when merged
  double height = 0.0;  // running-max of raw over the subtree, divided by the largest raw
};

struct Dendrogram {
  int leaf_count = 0;
  std::vector<MergeNode> merges;  // in merge order
  int root = 0;

  bool is_leaf(int id) const { return id < leaf_count; }
  Span span_of(int id) const;
  const MergeNode* find(Span span) const;
};

struct ClusteringOptions {
  Aggregation agg = Aggregation::sum;
  DistanceConfig distance;
  Exec exec = Exec::parallel;
  // Called after every merge with the merge record (height not yet normalised).
  std::function<void(const MergeNode&)> on_merge;
};

// Adjacency-constrained agglomeration: repeatedly merge the adjacent pair with the
// smallest distance (leftmost on ties), recomputing distances on union graphs.
Dendrogram build_dendrogram(const DynamicGraph& dg, const Scope& scope = Scope::whole(),
                            const ClusteringOptions& opts = {});

struct Cut {
  std::optional<double> level;
  std::optional<int> k;
  std::vector<Span> clusters;  // contiguous, time-ordered, covering [0..T]
};

// Keeps merges with height <= level.
Cut cut(const Dendrogram& d, double level);
// Undoes the k-1 highest merges, ties broken by later merge first.
Cut cut_k(const Dendrogram& d, int k);
int cluster_count(const Dendrogram& d, double level);

// A cluster and (for non-leaf clusters) its two child spans.
struct ClusterRef {
  Span span;
  std::optional<std::pair<Span, Span>> children;
};
ClusterRef cluster_ref(const Dendrogram& d, Span span);

// Left fold of union_group over the snapshots in span.
SnapshotGroup group_for_span(const DynamicGraph& dg, Span span, Aggregation agg = Aggregation::sum);
// Same, applied to already ego-restricted snapshots.
std::vector<SnapshotGroup> scoped_snapshots(const DynamicGraph& dg, const Scope& scope);

nlohmann::ordered_json to_json(const Dendrogram& d, const DynamicGraph* dg = nullptr);
nlohmann::ordered_json to_json(const Cut& c);

}  // namespace dgc
