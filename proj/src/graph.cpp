#include "dgcomics/graph.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"

namespace dgc {

AttributeVector::AttributeVector(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

double AttributeVector::get(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

void AttributeVector::set(std::string key, double value) {
  if (key.empty()) throw ValidationError("attribute name must be non-empty");
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ValidationError(fmt::format("attribute '{}' must be a finite non-negative number, got {}", key, value));
  }
  entries_[std::move(key)] = value;
}

void AttributeVector::add(const std::string& key, double value) { set(key, get(key) + value); }

std::string LinkKey::str(bool directed) const {
  return directed ? source + "->" + target : source + "--" + target;
}

LinkKey make_link_key(std::string a, std::string b, bool directed) {
  if (!directed && b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::string ElementKey::str(bool directed) const {
  if (kind == Kind::node) return first;
  return LinkKey{first, second}.str(directed);
}

const Node* Graph::find_node(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Link* Graph::find_link(const LinkKey& key) const {
  auto it = links_.find(key);
  return it == links_.end() ? nullptr : &it->second;
}

Node& Graph::add_node(Node node) {
  if (node.id.empty()) throw ValidationError("node id must be non-empty");
  auto [it, inserted] = nodes_.emplace(node.id, std::move(node));
  if (!inserted) throw ValidationError(fmt::format("duplicate node id '{}'", it->first));
  return it->second;
}

Link& Graph::add_link(const std::string& a, const std::string& b, AttributeVector attrs) {
  if (!has_node(a)) throw ValidationError(fmt::format("link endpoint '{}' is not a node", a));
  if (!has_node(b)) throw ValidationError(fmt::format("link endpoint '{}' is not a node", b));
  if (a == b) throw ValidationError(fmt::format("self-loop on '{}' is not supported", a));
  if (!(attrs.get("weight") > 0.0)) {
    throw ValidationError(fmt::format("link {}-{} needs a positive weight", a, b));
  }
  LinkKey key = make_link_key(a, b, directed_);
  auto [it, inserted] = links_.emplace(key, Link{key, std::move(attrs)});
  if (!inserted) throw ValidationError(fmt::format("duplicate link {}", key.str(directed_)));
  return it->second;
}

std::map<std::string, std::vector<const Link*>, std::less<>> Graph::incidence() const {
  std::map<std::string, std::vector<const Link*>, std::less<>> out;
  for (const auto& [id, node] : nodes_) out[id];
  for (const auto& [key, link] : links_) {
    out[key.source].push_back(&link);
    out[key.target].push_back(&link);
  }
  return out;
}

double Graph::total_weight() const {
  double total = 0.0;
  for (const auto& [key, link] : links_) total += link.weight();
  return total;
}

std::vector<std::string> DynamicGraph::labels() const {
  std::vector<std::string> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(s.label);
  return out;
}

int DynamicGraph::find_time(std::string_view label) const {
  for (const auto& s : snapshots) {
    if (s.label == label) return s.time;
  }
  return -1;
}

std::string DynamicGraph::span_label(Span span) const {
  auto label = [&](int t) {
    return t >= 0 && t < static_cast<int>(snapshots.size()) ? snapshots[t].label : std::to_string(t);
  };
  if (span.start == span.end) return label(span.start);
  return label(span.start) + "–" + label(span.end);
}

Aggregation parse_aggregation(std::string_view s) {
  if (s == "sum") return Aggregation::sum;
  if (s == "max") return Aggregation::max;
  if (s == "last") return Aggregation::last;
  throw ValidationError(fmt::format("unknown aggregation '{}' (expected sum|max|last)", s));
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::sum: return "sum";
    case Aggregation::max: return "max";
    case Aggregation::last: return "last";
  }
  return "sum";
}

EgoLevel parse_ego_level(std::string_view s) {
  if (s == "1" || s == "1.0") return EgoLevel::one;
  if (s == "1.5") return EgoLevel::one_and_half;
  throw ValidationError(fmt::format("unknown ego level '{}' (expected 1.0 or 1.5)", s));
}

std::string_view to_string(EgoLevel level) { return level == EgoLevel::one ? "1.0" : "1.5"; }

namespace {

AttributeVector combine(const AttributeVector& earlier, const AttributeVector& later, Aggregation agg) {
  if (agg == Aggregation::last) return later;
  AttributeVector out = earlier;
  for (const auto& [k, v] : later.entries()) {
    if (agg == Aggregation::sum) {
      out.set(k, earlier.get(k) + v);
    } else {
      out.set(k, std::max(earlier.get(k), v));
    }
  }
  return out;
}

}  // namespace

Graph union_graph(const Graph& earlier, const Graph& later, Aggregation agg) {
  Graph out = earlier;
  for (const auto& [id, node] : later.nodes()) {
    const Node* prev = earlier.find_node(id);
    if (!prev) {
      out.put_node(node);
      continue;
    }
    Node merged = *prev;
    merged.attrs = combine(prev->attrs, node.attrs, agg);
    if (!node.display_name.empty()) merged.display_name = node.display_name;
    for (const auto& [k, v] : node.categories) merged.categories[k] = v;
    out.put_node(merged);
  }
  for (const auto& [key, link] : later.links()) {
    const Link* prev = earlier.find_link(key);
    if (!prev) {
      out.put_link(link);
    } else {
      out.put_link(Link{key, combine(prev->attrs, link.attrs, agg)});
    }
  }
  return out;
}

SnapshotGroup union_group(const SnapshotGroup& a, const SnapshotGroup& b, Aggregation agg) {
  const bool a_first = a.span.end + 1 == b.span.start;
  const bool b_first = b.span.end + 1 == a.span.start;
  if (!a_first && !b_first) {
    throw ContractViolation(fmt::format("union of non-adjacent spans [{},{}] and [{},{}]", a.span.start, a.span.end,
                                        b.span.start, b.span.end));
  }
  const SnapshotGroup& earlier = a_first ? a : b;
  const SnapshotGroup& later = a_first ? b : a;
  return {{earlier.span.start, later.span.end}, union_graph(earlier.graph, later.graph, agg)};
}

GraphDiff diff(const Graph& before, const Graph& after) {
  GraphDiff d;
  for (const auto& [id, node] : before.nodes()) {
    const Node* other = after.find_node(id);
    if (!other) {
      d.deleted_nodes.insert(id);
      continue;
    }
    d.preserved_nodes.insert(id);
    if (!(node.attrs == other->attrs)) d.attr_changes[ElementKey::node(id)] = {node.attrs, other->attrs};
  }
  for (const auto& [id, node] : after.nodes()) {
    if (!before.has_node(id)) d.added_nodes.insert(id);
  }
  for (const auto& [key, link] : before.links()) {
    const Link* other = after.find_link(key);
    if (!other) {
      d.deleted_links.insert(key);
      continue;
    }
    d.preserved_links.insert(key);
    if (!(link.attrs == other->attrs)) d.attr_changes[ElementKey::link(key)] = {link.attrs, other->attrs};
  }
  for (const auto& [key, link] : after.links()) {
    if (!before.find_link(key)) d.added_links.insert(key);
  }
  return d;
}

Graph ego_network(const Graph& g, const std::set<std::string>& egos, EgoLevel level) {
  Graph out(g.directed());
  if (g.empty()) return out;
  const auto incident = g.incidence();
  for (const auto& ego : egos) {
    auto it = incident.find(ego);
    if (it == incident.end()) continue;
    std::set<std::string> members{ego};
    for (const Link* link : it->second) {
      members.insert(link->other(ego));
      out.put_link(*link);
    }
    for (const auto& id : members) out.put_node(*g.find_node(id));
    if (level == EgoLevel::one) continue;
    for (const auto& alter : members) {
      if (alter == ego) continue;
      for (const Link* link : incident.find(alter)->second) {
        if (members.count(link->other(alter))) out.put_link(*link);
      }
    }
  }
  return out;
}

SnapshotGroup ego_network(const SnapshotGroup& g, const std::set<std::string>& egos, EgoLevel level) {
  return {g.span, ego_network(g.graph, egos, level)};
}

Graph induced_subgraph(const Graph& g, const std::set<std::string>& keep) {
  Graph out(g.directed());
  for (const auto& [id, node] : g.nodes()) {
    if (keep.count(id)) out.put_node(node);
  }
  for (const auto& [key, link] : g.links()) {
    if (keep.count(key.source) && keep.count(key.target)) out.put_link(link);
  }
  return out;
}

}  // namespace dgc
