#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgcomics/graph.hpp"
#include "dgcomics/similarity.hpp"

namespace dgc {

struct Community {
  std::string id;  // "<t>:<smallest member id>"
  std::vector<std::string> members;  // sorted

  std::size_t size() const { return members.size(); }
};

struct CommunityPartition {
  int time = 0;
  std::vector<Community> communities;  // ordered by size desc, then id
};

struct CommunityMethod {
  enum class Kind { louvain, attribute };
  Kind kind = Kind::louvain;
  std::string key;  // attribute name for Kind::attribute

  // "louvain" or "attribute:<key>".
  static CommunityMethod parse(std::string_view s);
  std::string str() const;
};

// Undirected weighted adjacency over a dense node index (ids ascending).
struct WeightedAdjacency {
  std::vector<std::string> ids;
  std::vector<std::vector<std::pair<int, double>>> neighbors;  // sorted by neighbour index

  // Directed links are symmetrised by summing both directions.
  static WeightedAdjacency from(const Graph& g);
  double total_weight() const;  // sum over undirected edges
};

struct LouvainResult {
  std::vector<int> membership;                // per node index, dense community labels
  std::vector<double> modularity_per_phase;   // modularity of the original graph after each phase
};

double modularity(const WeightedAdjacency& g, const std::vector<int>& membership, double resolution = 1.0);
// Deterministic Louvain: nodes visited in ascending index order, ties keep the current community
// then prefer the lowest community label.
LouvainResult louvain(const WeightedAdjacency& g, double resolution = 1.0);

// Per-snapshot detection; Louvain runs independently per snapshot (parallel under Exec::parallel).
std::vector<CommunityPartition> detect_communities(const DynamicGraph& dg, const CommunityMethod& method,
                                                   Exec exec = Exec::parallel);
CommunityPartition partition_from_groups(int time, std::vector<std::vector<std::string>> groups);

struct SuccessorEdge {
  int time = 0;  // time of `from`; `to` lives at time + 1
  std::string from;
  std::string to;
  std::size_t overlap = 0;
  double jaccard = 0.0;
};

// Edge c -> c' iff Jaccard(members) >= theta.
std::vector<SuccessorEdge> match_communities(const CommunityPartition& now, const CommunityPartition& next,
                                             double theta = 0.1);

enum class Archetype { birth, death, growth, contraction, merge, split };
std::string_view to_string(Archetype a);

struct CommunityEvent {
  int time = 0;
  std::string community;
  Archetype type = Archetype::birth;

  auto operator<=>(const CommunityEvent&) const = default;
  bool operator==(const CommunityEvent&) const = default;
};

struct TimelineOptions {
  double theta = 0.1;  // matching threshold
  double delta = 0.2;  // relative size change for growth/contraction
};

struct CommunityTimeline {
  std::vector<CommunityPartition> partitions;
  std::vector<SuccessorEdge> successors;
  std::vector<CommunityEvent> events;
};

// birth: no predecessor at t > 0; death: no successor at t < T (reported at the community's own t);
// merge: >= 2 predecessors; split: >= 2 successors; growth/contraction: single predecessor
// and |size change| / predecessor size >= delta.
std::vector<CommunityEvent> classify_events(const CommunityTimeline& timeline, double delta = 0.2);
CommunityTimeline build_timeline(std::vector<CommunityPartition> partitions, const TimelineOptions& opts = {});

struct PathStep {
  int time = 0;
  std::string community;
};
// Absent times are skipped, so gaps show up as jumps in `time`.
std::map<std::string, std::vector<PathStep>> character_paths(const CommunityTimeline& timeline,
                                                             const std::vector<std::string>& characters);

// Grid cells carry size and a size-quantile color bucket (0..buckets-1).
nlohmann::ordered_json to_json(const CommunityTimeline& timeline, const DynamicGraph* dg = nullptr, int buckets = 5);

}  // namespace dgc
