#include "dgcomics/clustering.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"

namespace dgc {

Scope Scope::parse(std::string_view s, EgoLevel level) {
  if (s.empty() || s == "whole") return Scope::whole();
  if (s.substr(0, 4) == "ego:" && s.size() > 4) return Scope::of_ego(std::string(s.substr(4)), level);
  throw ValidationError(fmt::format("unknown scope '{}' (expected whole or ego:<node>)", s));
}

std::string Scope::key() const {
  if (!ego) return "whole";
  return fmt::format("ego:{}@{}", *ego, to_string(level));
}

Span Dendrogram::span_of(int id) const {
  if (is_leaf(id)) return {id, id};
  return merges.at(static_cast<std::size_t>(id - leaf_count)).span;
}

const MergeNode* Dendrogram::find(Span span) const {
  for (const auto& m : merges) {
    if (m.span == span) return &m;
  }
  return nullptr;
}

std::vector<SnapshotGroup> scoped_snapshots(const DynamicGraph& dg, const Scope& scope) {
  std::vector<SnapshotGroup> out;
  out.reserve(dg.snapshots.size());
  for (const auto& s : dg.snapshots) {
    if (scope.ego) {
      out.push_back({{s.time, s.time}, ego_network(s.graph, {*scope.ego}, scope.level)});
    } else {
      out.push_back(SnapshotGroup::of(s));
    }
  }
  return out;
}

Dendrogram build_dendrogram(const DynamicGraph& dg, const Scope& scope, const ClusteringOptions& opts) {
  if (dg.snapshots.empty()) throw ValidationError("cannot cluster an empty snapshot sequence");

  struct Active {
    int id;
    SnapshotGroup group;
  };
  std::vector<Active> active;
  {
    auto groups = scoped_snapshots(dg, scope);
    for (std::size_t i = 0; i < groups.size(); ++i) active.push_back({static_cast<int>(i), std::move(groups[i])});
  }

  Dendrogram d;
  d.leaf_count = static_cast<int>(active.size());
  d.root = 0;

  // dist[i] = D(active[i], active[i + 1])
  std::vector<double> dist;
  {
    std::vector<GraphPair> pairs;
    for (std::size_t i = 0; i + 1 < active.size(); ++i) pairs.push_back({&active[i].group.graph, &active[i + 1].group.graph});
    dist = kernels::batch_distances(pairs, opts.distance, opts.exec);
  }

  while (active.size() > 1) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.size(); ++i) {
      if (dist[i] < dist[best]) best = i;
    }
    MergeNode m;
    m.id = d.leaf_count + static_cast<int>(d.merges.size());
    m.left = active[best].id;
    m.right = active[best + 1].id;
    m.raw = dist[best];
    SnapshotGroup merged = union_group(active[best].group, active[best + 1].group, opts.agg);
    m.span = merged.span;
    d.merges.push_back(m);
    if (opts.on_merge) opts.on_merge(m);

    active[best] = {m.id, std::move(merged)};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(best));

    // Only the (at most two) neighbours of the new group need new distances.
    std::vector<GraphPair> pairs;
    std::vector<std::size_t> slots;
    if (best > 0) {
      pairs.push_back({&active[best - 1].group.graph, &active[best].group.graph});
      slots.push_back(best - 1);
    }
    if (best + 1 < active.size()) {
      pairs.push_back({&active[best].group.graph, &active[best + 1].group.graph});
      slots.push_back(best);
    }
    const auto fresh = kernels::batch_distances(pairs, opts.distance, opts.exec);
    for (std::size_t i = 0; i < slots.size(); ++i) dist[slots[i]] = fresh[i];
  }

  if (!d.merges.empty()) {
    d.root = d.merges.back().id;
    std::vector<double> effective(static_cast<std::size_t>(d.leaf_count) + d.merges.size(), 0.0);
    double top = 0.0;
    for (const auto& m : d.merges) {
      const double h = std::max({m.raw, effective[static_cast<std::size_t>(m.left)], effective[static_cast<std::size_t>(m.right)]});
      effective[static_cast<std::size_t>(m.id)] = h;
      top = std::max(top, h);
    }
    for (auto& m : d.merges) m.height = top > 0.0 ? effective[static_cast<std::size_t>(m.id)] / top : 0.0;
  }
  return d;
}

namespace {

// Each merge joins exactly one boundary between adjacent leaves: the end of its left child.
int joined_boundary(const Dendrogram& d, const MergeNode& m) { return d.span_of(m.left).end; }

Cut from_boundaries(const Dendrogram& d, const std::vector<bool>& joined) {
  Cut c;
  int start = 0;
  for (int t = 0; t < d.leaf_count; ++t) {
    if (t + 1 == d.leaf_count || !joined[static_cast<std::size_t>(t)]) {
      c.clusters.push_back({start, t});
      start = t + 1;
    }
  }
  return c;
}

}  // namespace

Cut cut(const Dendrogram& d, double level) {
  if (!(level >= 0.0 && level <= 1.0)) throw ValidationError(fmt::format("cut level {} outside [0,1]", level));
  std::vector<bool> joined(static_cast<std::size_t>(d.leaf_count), false);
  for (const auto& m : d.merges) {
    if (m.height <= level) joined[static_cast<std::size_t>(joined_boundary(d, m))] = true;
  }
  Cut c = from_boundaries(d, joined);
  c.level = level;
  return c;
}

Cut cut_k(const Dendrogram& d, int k) {
  if (k < 1 || k > d.leaf_count) {
    throw ValidationError(fmt::format("cluster count {} outside [1,{}]", k, d.leaf_count));
  }
  std::vector<std::size_t> order(d.merges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d.merges[a].height != d.merges[b].height) return d.merges[a].height > d.merges[b].height;
    return a > b;
  });
  std::vector<bool> joined(static_cast<std::size_t>(d.leaf_count), true);
  for (int i = 0; i < k - 1; ++i) joined[static_cast<std::size_t>(joined_boundary(d, d.merges[order[static_cast<std::size_t>(i)]]))] = false;
  Cut c = from_boundaries(d, joined);
  c.k = k;
  return c;
}

int cluster_count(const Dendrogram& d, double level) { return static_cast<int>(cut(d, level).clusters.size()); }

ClusterRef cluster_ref(const Dendrogram& d, Span span) {
  ClusterRef ref{span, std::nullopt};
  if (span.start == span.end) return ref;
  const MergeNode* m = d.find(span);
  if (!m) {
    throw ValidationError(fmt::format("span [{},{}] is not a dendrogram cluster", span.start, span.end));
  }
  ref.children = std::make_pair(d.span_of(m->left), d.span_of(m->right));
  return ref;
}

SnapshotGroup group_for_span(const DynamicGraph& dg, Span span, Aggregation agg) {
  if (span.start > span.end) throw ValidationError(fmt::format("empty span [{},{}]", span.start, span.end));
  if (span.start < 0 || span.end > dg.last_time()) {
    throw ValidationError(fmt::format("span [{},{}] outside [0,{}]", span.start, span.end, dg.last_time()));
  }
  SnapshotGroup g = SnapshotGroup::of(dg.snapshots[static_cast<std::size_t>(span.start)]);
  for (int t = span.start + 1; t <= span.end; ++t) {
    g = union_group(g, SnapshotGroup::of(dg.snapshots[static_cast<std::size_t>(t)]), agg);
  }
  return g;
}

nlohmann::ordered_json to_json(const Dendrogram& d, const DynamicGraph* dg) {
  nlohmann::ordered_json j;
  j["leaves"] = nlohmann::ordered_json::array();
  for (int i = 0; i < d.leaf_count; ++i) j["leaves"].push_back(i);
  if (dg) j["labels"] = dg->labels();
  j["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : d.merges) {
    nlohmann::ordered_json mj;
    mj["id"] = m.id;
    mj["children"] = {m.left, m.right};
    mj["span"] = {m.span.start, m.span.end};
    mj["raw"] = m.raw;
    mj["height"] = m.height;
    j["merges"].push_back(std::move(mj));
  }
  j["root"] = d.root;
  return j;
}

nlohmann::ordered_json to_json(const Cut& c) {
  nlohmann::ordered_json j;
  if (c.level) j["level"] = *c.level;
  if (c.k) j["k"] = *c.k;
  j["clusters"] = nlohmann::ordered_json::array();
  for (const auto& s : c.clusters) j["clusters"].push_back({s.start, s.end});
  return j;
}

}  // namespace dgc
