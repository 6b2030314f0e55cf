#include "dgcomics/community.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"

namespace dgc {

CommunityMethod CommunityMethod::parse(std::string_view s) {
  if (s.empty() || s == "louvain") return {};
  if (s.substr(0, 10) == "attribute:" && s.size() > 10) return {Kind::attribute, std::string(s.substr(10))};
  throw ValidationError(fmt::format("unknown community method '{}' (expected louvain or attribute:<key>)", s));
}

std::string CommunityMethod::str() const { return kind == Kind::louvain ? "louvain" : "attribute:" + key; }

WeightedAdjacency WeightedAdjacency::from(const Graph& g) {
  WeightedAdjacency a;
  std::map<std::string, int, std::less<>> index;
  for (const auto& [id, node] : g.nodes()) {
    index[id] = static_cast<int>(a.ids.size());
    a.ids.push_back(id);
  }
  std::vector<std::map<int, double>> acc(a.ids.size());
  for (const auto& [key, link] : g.links()) {
    const int s = index[key.source];
    const int t = index[key.target];
    acc[static_cast<std::size_t>(s)][t] += link.weight();
    acc[static_cast<std::size_t>(t)][s] += link.weight();
  }
  a.neighbors.resize(a.ids.size());
  for (std::size_t i = 0; i < acc.size(); ++i) a.neighbors[i].assign(acc[i].begin(), acc[i].end());
  return a;
}

double WeightedAdjacency::total_weight() const {
  double twice = 0.0;
  for (const auto& row : neighbors) {
    for (const auto& [j, w] : row) twice += w;
  }
  return twice / 2.0;
}

double modularity(const WeightedAdjacency& g, const std::vector<int>& membership, double resolution) {
  const double m2 = 2.0 * g.total_weight();
  if (m2 == 0.0) return 0.0;
  std::map<int, double> inside;
  std::map<int, double> tot;
  for (std::size_t i = 0; i < g.neighbors.size(); ++i) {
    const int ci = membership[i];
    for (const auto& [j, w] : g.neighbors[i]) {
      tot[ci] += w;
      if (membership[static_cast<std::size_t>(j)] == ci) inside[ci] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) q += inside[c] / m2 - resolution * (t / m2) * (t / m2);
  return q;
}

namespace {

struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self;                               // A_ii
};

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const LevelGraph& g, double resolution, std::vector<int>& comm) {
  const std::size_t n = g.adj.size();
  std::vector<double> k(n, 0.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = g.self[i];
    for (const auto& [j, w] : g.adj[i]) k[i] += w;
    m2 += k[i];
  }
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot = k;
  std::vector<double> to_comm(n, 0.0);
  std::vector<int> touched;

  bool moved_any = false;
  for (int pass = 0; pass < 1000; ++pass) {
    int moves = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int old = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        const int c = comm[static_cast<std::size_t>(j)];
        if (to_comm[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        to_comm[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(old)] -= k[i];
      int best = old;
      double best_gain = to_comm[static_cast<std::size_t>(old)] - resolution * tot[static_cast<std::size_t>(old)] * k[i] / m2;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        const double gain = to_comm[static_cast<std::size_t>(c)] - resolution * tot[static_cast<std::size_t>(c)] * k[i] / m2;
        if (gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        }
      }
      for (int c : touched) to_comm[static_cast<std::size_t>(c)] = 0.0;
      tot[static_cast<std::size_t>(best)] += k[i];
      comm[i] = best;
      if (best != old) ++moves;
    }
    if (moves == 0) break;
    moved_any = true;
  }
  return moved_any;
}

}  // namespace

LouvainResult louvain(const WeightedAdjacency& g, double resolution) {
  const std::size_t n = g.ids.size();
  LouvainResult result;
  result.membership.resize(n);
  std::iota(result.membership.begin(), result.membership.end(), 0);
  if (g.total_weight() == 0.0) {
    result.modularity_per_phase.push_back(modularity(g, result.membership, resolution));
    return result;
  }

  LevelGraph level;
  level.adj = g.neighbors;
  level.self.assign(n, 0.0);
  std::vector<int> node_of(n);  // original node -> level node
  std::iota(node_of.begin(), node_of.end(), 0);

  while (true) {
    std::vector<int> comm;
    if (!local_moving(level, resolution, comm)) break;

    // Dense relabelling in order of first appearance.
    std::vector<int> label(level.adj.size(), -1);
    int next = 0;
    for (int c : comm) {
      if (label[static_cast<std::size_t>(c)] < 0) label[static_cast<std::size_t>(c)] = next++;
    }
    for (std::size_t v = 0; v < n; ++v) {
      node_of[v] = label[static_cast<std::size_t>(comm[static_cast<std::size_t>(node_of[v])])];
      result.membership[v] = node_of[v];
    }
    result.modularity_per_phase.push_back(modularity(g, result.membership, resolution));
    if (static_cast<std::size_t>(next) == level.adj.size()) break;

    LevelGraph agg;
    agg.adj.resize(static_cast<std::size_t>(next));
    agg.self.assign(static_cast<std::size_t>(next), 0.0);
    std::vector<std::map<int, double>> acc(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < level.adj.size(); ++i) {
      const int ci = label[static_cast<std::size_t>(comm[i])];
      agg.self[static_cast<std::size_t>(ci)] += level.self[i];
      for (const auto& [j, w] : level.adj[i]) {
        const int cj = label[static_cast<std::size_t>(comm[static_cast<std::size_t>(j)])];
        if (ci == cj) {
          agg.self[static_cast<std::size_t>(ci)] += w;
        } else {
          acc[static_cast<std::size_t>(ci)][cj] += w;
        }
      }
    }
    for (std::size_t c = 0; c < acc.size(); ++c) agg.adj[c].assign(acc[c].begin(), acc[c].end());
    level = std::move(agg);
  }
  if (result.modularity_per_phase.empty()) {
    result.modularity_per_phase.push_back(modularity(g, result.membership, resolution));
  }
  return result;
}

CommunityPartition partition_from_groups(int time, std::vector<std::vector<std::string>> groups) {
  CommunityPartition p;
  p.time = time;
  for (auto& members : groups) {
    if (members.empty()) continue;
    std::sort(members.begin(), members.end());
    p.communities.push_back({fmt::format("{}:{}", time, members.front()), std::move(members)});
  }
  std::sort(p.communities.begin(), p.communities.end(), [](const Community& a, const Community& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.id < b.id;
  });
  return p;
}

namespace {

CommunityPartition detect_one(const Snapshot& s, const CommunityMethod& method) {
  std::map<std::string, std::vector<std::string>> by_value;
  if (method.kind == CommunityMethod::Kind::attribute) {
    for (const auto& [id, node] : s.graph.nodes()) {
      auto cat = node.categories.find(method.key);
      if (cat != node.categories.end()) {
        by_value[cat->second].push_back(id);
      } else if (node.attrs.contains(method.key)) {
        by_value[fmt::format("{}", node.attrs.get(method.key))].push_back(id);
      } else {
        throw ValidationError(
            fmt::format("node '{}' at time '{}' has no attribute '{}'", id, s.label, method.key));
      }
    }
    std::vector<std::vector<std::string>> groups;
    for (auto& [value, members] : by_value) groups.push_back(std::move(members));
    return partition_from_groups(s.time, std::move(groups));
  }
  const auto adj = WeightedAdjacency::from(s.graph);
  const auto result = louvain(adj);
  std::map<int, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < adj.ids.size(); ++i) groups[result.membership[i]].push_back(adj.ids[i]);
  std::vector<std::vector<std::string>> out;
  for (auto& [c, members] : groups) out.push_back(std::move(members));
  return partition_from_groups(s.time, std::move(out));
}

}  // namespace

std::vector<CommunityPartition> detect_communities(const DynamicGraph& dg, const CommunityMethod& method, Exec exec) {
  std::vector<CommunityPartition> out(dg.snapshots.size());
  for_each_index(dg.snapshots.size(), exec, [&](std::size_t t) { out[t] = detect_one(dg.snapshots[t], method); });
  return out;
}

std::vector<SuccessorEdge> match_communities(const CommunityPartition& now, const CommunityPartition& next,
                                             double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError(fmt::format("matching threshold {} outside (0,1]", theta));
  std::vector<SuccessorEdge> out;
  for (const auto& a : now.communities) {
    for (const auto& b : next.communities) {
      std::vector<std::string> common;
      std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      const double jaccard =
          static_cast<double>(common.size()) / static_cast<double>(a.size() + b.size() - common.size());
      if (jaccard >= theta) out.push_back({now.time, a.id, b.id, common.size(), jaccard});
    }
  }
  return out;
}

std::string_view to_string(Archetype a) {
  switch (a) {
    case Archetype::birth: return "birth";
    case Archetype::death: return "death";
    case Archetype::growth: return "growth";
    case Archetype::contraction: return "contraction";
    case Archetype::merge: return "merge";
    case Archetype::split: return "split";
  }
  return "birth";
}

std::vector<CommunityEvent> classify_events(const CommunityTimeline& timeline, double delta) {
  std::map<std::string, std::vector<const SuccessorEdge*>> preds;
  std::map<std::string, std::vector<const SuccessorEdge*>> succs;
  for (const auto& e : timeline.successors) {
    preds[e.to].push_back(&e);
    succs[e.from].push_back(&e);
  }
  std::map<std::string, std::size_t> sizes;
  for (const auto& p : timeline.partitions) {
    for (const auto& c : p.communities) sizes[c.id] = c.size();
  }

  std::vector<CommunityEvent> events;
  const std::size_t last = timeline.partitions.empty() ? 0 : timeline.partitions.size() - 1;
  for (std::size_t idx = 0; idx < timeline.partitions.size(); ++idx) {
    const auto& p = timeline.partitions[idx];
    for (const auto& c : p.communities) {
      const std::size_t np = preds.count(c.id) ? preds[c.id].size() : 0;
      const std::size_t ns = succs.count(c.id) ? succs[c.id].size() : 0;
      if (idx > 0 && np == 0) events.push_back({p.time, c.id, Archetype::birth});
      if (idx < last && ns == 0) events.push_back({p.time, c.id, Archetype::death});
      if (np >= 2) events.push_back({p.time, c.id, Archetype::merge});
      if (ns >= 2) events.push_back({p.time, c.id, Archetype::split});
      if (np == 1) {
        const double before = static_cast<double>(sizes[preds[c.id].front()->from]);
        const double change = (static_cast<double>(c.size()) - before) / before;
        if (change >= delta - 1e-12) events.push_back({p.time, c.id, Archetype::growth});
        if (change <= -delta + 1e-12) events.push_back({p.time, c.id, Archetype::contraction});
      }
    }
  }
  std::sort(events.begin(), events.end());
  return events;
}

CommunityTimeline build_timeline(std::vector<CommunityPartition> partitions, const TimelineOptions& opts) {
  CommunityTimeline tl;
  tl.partitions = std::move(partitions);
  for (std::size_t i = 0; i + 1 < tl.partitions.size(); ++i) {
    auto edges = match_communities(tl.partitions[i], tl.partitions[i + 1], opts.theta);
    tl.successors.insert(tl.successors.end(), edges.begin(), edges.end());
  }
  tl.events = classify_events(tl, opts.delta);
  return tl;
}

std::map<std::string, std::vector<PathStep>> character_paths(const CommunityTimeline& timeline,
                                                             const std::vector<std::string>& characters) {
  std::map<std::string, std::vector<PathStep>> out;
  for (const auto& ch : characters) {
    auto& path = out[ch];
    for (const auto& p : timeline.partitions) {
      for (const auto& c : p.communities) {
        if (std::binary_search(c.members.begin(), c.members.end(), ch)) {
          path.push_back({p.time, c.id});
          break;
        }
      }
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const CommunityTimeline& timeline, const DynamicGraph* dg, int buckets) {
  std::vector<std::size_t> sizes;
  for (const auto& p : timeline.partitions) {
    for (const auto& c : p.communities) sizes.push_back(c.size());
  }
  std::sort(sizes.begin(), sizes.end());
  auto bucket_of = [&](std::size_t size) {
    const auto below = static_cast<double>(std::lower_bound(sizes.begin(), sizes.end(), size) - sizes.begin());
    const int b = static_cast<int>(below * buckets / static_cast<double>(sizes.size()));
    return std::min(b, buckets - 1);
  };

  nlohmann::ordered_json j;
  if (dg) j["times"] = dg->labels();
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& p : timeline.partitions) {
    int rank = 0;
    for (const auto& c : p.communities) {
      nlohmann::ordered_json cell;
      cell["t"] = p.time;
      cell["id"] = c.id;
      cell["rank"] = rank++;
      cell["size"] = c.size();
      cell["bucket"] = bucket_of(c.size());
      cell["members"] = c.members;
      j["cells"].push_back(std::move(cell));
    }
  }
  j["successors"] = nlohmann::ordered_json::array();
  for (const auto& e : timeline.successors) {
    j["successors"].push_back(
        {{"t", e.time}, {"from", e.from}, {"to", e.to}, {"overlap", e.overlap}, {"jaccard", e.jaccard}});
  }
  j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : timeline.events) {
    j["events"].push_back({{"t", e.time}, {"community", e.community}, {"type", to_string(e.type)}});
  }
  return j;
}

}  // namespace dgc
