#pragma once

#include <compare>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgc {

// Sparse non-negative attribute vector. An absent key reads as 0.
class AttributeVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  AttributeVector() = default;
  AttributeVector(std::initializer_list<std::pair<const std::string, double>> init);

  double get(std::string_view key) const;
  bool contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  void set(std::string key, double value);
  void add(const std::string& key, double value);

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const Map& entries() const noexcept { return entries_; }

  friend bool operator==(const AttributeVector&, const AttributeVector&) = default;

 private:
  Map entries_;
};

struct Node {
  std::string id;
  AttributeVector attrs;
  std::string display_name;
  // Categorical attributes (e.g. affiliation); not part of the distance metric.
  std::map<std::string, std::string> categories;

  const std::string& label() const { return display_name.empty() ? id : display_name; }
  friend bool operator==(const Node&, const Node&) = default;
};

// For undirected graphs source <= target (canonical sorted pair).
struct LinkKey {
  std::string source;
  std::string target;

  auto operator<=>(const LinkKey&) const = default;
  bool operator==(const LinkKey&) const = default;
  std::string str(bool directed) const;
};

LinkKey make_link_key(std::string a, std::string b, bool directed);

struct Link {
  LinkKey key;
  AttributeVector attrs;  // always carries "weight" > 0

  double weight() const { return attrs.get("weight"); }
  const std::string& other(std::string_view id) const { return key.source == id ? key.target : key.source; }
  friend bool operator==(const Link&, const Link&) = default;
};

// Node or link identity used where both kinds share a keyspace (diffs, similarity reports).
struct ElementKey {
  enum class Kind { node, link };
  Kind kind = Kind::node;
  std::string first;
  std::string second;

  static ElementKey node(std::string id) { return {Kind::node, std::move(id), {}}; }
  static ElementKey link(const LinkKey& k) { return {Kind::link, k.source, k.target}; }
  auto operator<=>(const ElementKey&) const = default;
  bool operator==(const ElementKey&) const = default;
  std::string str(bool directed) const;
};

class Graph {
 public:
  using NodeMap = std::map<std::string, Node, std::less<>>;
  using LinkMap = std::map<LinkKey, Link>;

  Graph() = default;
  explicit Graph(bool directed) : directed_(directed) {}

  bool directed() const noexcept { return directed_; }
  const NodeMap& nodes() const noexcept { return nodes_; }
  const LinkMap& links() const noexcept { return links_; }
  bool empty() const noexcept { return nodes_.empty(); }

  bool has_node(std::string_view id) const { return nodes_.find(id) != nodes_.end(); }
  const Node* find_node(std::string_view id) const;
  const Link* find_link(const LinkKey& key) const;

  // Throws ValidationError on duplicate ids or an empty id.
  Node& add_node(Node node);
  // Endpoints must exist; weight must be > 0; self-loops are rejected.
  Link& add_link(const std::string& a, const std::string& b, AttributeVector attrs);
  // Insert-or-replace, no validation beyond key canonicalisation. Used by set algebra.
  void put_node(const Node& node) { nodes_[node.id] = node; }
  void put_link(const Link& link) { links_[link.key] = link; }

  // Incident links of every node, in link-key order.
  std::map<std::string, std::vector<const Link*>, std::less<>> incidence() const;
  double total_weight() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  bool directed_ = false;
  NodeMap nodes_;
  LinkMap links_;
};

struct Span {
  int start = 0;
  int end = 0;

  int length() const noexcept { return end - start + 1; }
  bool contains(int t) const noexcept { return t >= start && t <= end; }
  auto operator<=>(const Span&) const = default;
  bool operator==(const Span&) const = default;
};

struct Snapshot {
  int time = 0;
  std::string label;
  Graph graph;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct SnapshotGroup {
  Span span;
  Graph graph;

  static SnapshotGroup of(const Snapshot& s) { return {{s.time, s.time}, s.graph}; }
  friend bool operator==(const SnapshotGroup&, const SnapshotGroup&) = default;
};

struct DynamicGraph {
  std::string name;
  bool directed = false;
  std::vector<Snapshot> snapshots;  // snapshots[t].time == t

  int last_time() const { return static_cast<int>(snapshots.size()) - 1; }
  std::vector<std::string> labels() const;
  // Index of a time label, or -1.
  int find_time(std::string_view label) const;
  std::string span_label(Span span) const;
  friend bool operator==(const DynamicGraph&, const DynamicGraph&) = default;
};

enum class Aggregation { sum, max, last };
Aggregation parse_aggregation(std::string_view s);
std::string_view to_string(Aggregation a);

// 1.0: ego, alters, ego-alter ties. 1.5: additionally alter-alter ties.
enum class EgoLevel { one, one_and_half };
EgoLevel parse_ego_level(std::string_view s);
std::string_view to_string(EgoLevel level);

struct GraphDiff {
  std::set<std::string> added_nodes, deleted_nodes, preserved_nodes;
  std::set<LinkKey> added_links, deleted_links, preserved_links;
  std::map<ElementKey, std::pair<AttributeVector, AttributeVector>> attr_changes;
};

// Element-wise combination of two graphs. `later` wins for Aggregation::last.
Graph union_graph(const Graph& earlier, const Graph& later, Aggregation agg);
// Spans must be adjacent; throws ContractViolation otherwise.
SnapshotGroup union_group(const SnapshotGroup& a, const SnapshotGroup& b, Aggregation agg = Aggregation::sum);
GraphDiff diff(const Graph& before, const Graph& after);
inline GraphDiff diff(const SnapshotGroup& before, const SnapshotGroup& after) { return diff(before.graph, after.graph); }

Graph ego_network(const Graph& g, const std::set<std::string>& egos, EgoLevel level);
SnapshotGroup ego_network(const SnapshotGroup& g, const std::set<std::string>& egos, EgoLevel level);

// Restriction of g to a node subset (links with both endpoints kept).
Graph induced_subgraph(const Graph& g, const std::set<std::string>& keep);

}  // namespace dgc
