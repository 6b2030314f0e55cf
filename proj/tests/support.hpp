#pragma once

// Fixtures and checkers shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dgcomics/community.hpp"
#include "dgcomics/graph.hpp"

namespace dgc::testing {

// t0 {A,B; A-B w1}, t1 {A,B,C; A-B w2, A-C w1}, t2 {A,C; A-C w1}.
inline DynamicGraph tri() {
  DynamicGraph dg;
  dg.name = "tri";
  auto snap = [](int t, std::vector<std::string> nodes, std::vector<std::tuple<std::string, std::string, double>> links) {
    Snapshot s{t, std::to_string(t), Graph(false)};
    for (auto& n : nodes) s.graph.add_node(Node{n, {}, {}, {}});
    for (auto& [a, b, w] : links) s.graph.add_link(a, b, {{"weight", w}});
    return s;
  };
  dg.snapshots.push_back(snap(0, {"A", "B"}, {{"A", "B", 1.0}}));
  dg.snapshots.push_back(snap(1, {"A", "B", "C"}, {{"A", "B", 2.0}, {"A", "C", 1.0}}));
  dg.snapshots.push_back(snap(2, {"A", "C"}, {{"A", "C", 1.0}}));
  return dg;
}

inline const char* kTriCsv = "time,source,target,weight\n0,A,B,1\n1,A,B,2\n1,A,C,1\n2,A,C,1\n";

inline std::string node_name(int i) {
  std::string s = "n";
  if (i < 10) s += '0';
  return s + std::to_string(i);
}

// Random attributed graph on a subset of `universe` nodes with integer weights and attributes.
inline Graph random_graph(std::mt19937& rng, int universe, double node_p, double link_p, bool attrs = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, 5);
  Graph g(false);
  for (int i = 0; i < universe; ++i) {
    if (u(rng) >= node_p) continue;
    Node n{node_name(i), {}, {}, {}};
    if (attrs) {
      if (u(rng) < 0.7) n.attrs.set("papers", w(rng));
      if (u(rng) < 0.3) n.attrs.set("talks", w(rng) - 1);
    }
    g.add_node(std::move(n));
  }
  std::vector<std::string> ids;
  for (const auto& [id, n] : g.nodes()) ids.push_back(id);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (u(rng) < link_p) {
        AttributeVector a{{"weight", static_cast<double>(w(rng))}};
        if (attrs && u(rng) < 0.2) a.set("citations", w(rng));
        g.add_link(ids[i], ids[j], std::move(a));
      }
    }
  }
  return g;
}

// Apply random attributed edits: node arrivals/departures, link churn, weight and attribute changes.
inline Graph random_edit(std::mt19937& rng, const Graph& g, int universe) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> w(1, 5);
  Graph out(g.directed());
  for (const auto& [id, n] : g.nodes()) {
    if (u(rng) < 0.1) continue;
    Node m = n;
    if (u(rng) < 0.2) m.attrs.set("papers", w(rng));
    out.add_node(std::move(m));
  }
  for (int i = 0; i < universe; ++i) {
    if (!out.has_node(node_name(i)) && u(rng) < 0.08) out.add_node(Node{node_name(i), {{"papers", 1.0}}, {}, {}});
  }
  for (const auto& [key, link] : g.links()) {
    if (!out.has_node(key.source) || !out.has_node(key.target) || u(rng) < 0.15) continue;
    Link l = link;
    if (u(rng) < 0.25) l.attrs.set("weight", w(rng));
    out.put_link(l);
  }
  std::vector<std::string> ids;
  for (const auto& [id, n] : out.nodes()) ids.push_back(id);
  if (ids.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    const int adds = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < adds; ++k) {
      const auto a = ids[pick(rng)], b = ids[pick(rng)];
      if (a == b) continue;
      out.put_link(Link{make_link_key(a, b, false), {{"weight", static_cast<double>(w(rng))}}});
    }
  }
  return out;
}

inline DynamicGraph random_dynamic(std::mt19937& rng, int snapshots, int universe = 12) {
  DynamicGraph dg;
  dg.name = "random";
  Graph g = random_graph(rng, universe, 0.6, 0.3);
  for (int t = 0; t < snapshots; ++t) {
    if (t > 0) g = random_edit(rng, g, universe);
    dg.snapshots.push_back(Snapshot{t, std::to_string(2000 + t), g});
  }
  return dg;
}

// Minimal XML well-formedness check: balanced tags, quoted attributes, no duplicate
// attributes, known entities only, one root element. Returns "" or a description.
inline std::string xml_problem(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  auto is_name = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.'; };
  auto check_text = [&](std::size_t from, std::size_t to) -> std::string {
    for (std::size_t k = from; k < to; ++k) {
      if (s[k] == '<') return "stray '<'";
      if (s[k] == '&') {
        const auto end = s.find(';', k);
        if (end == std::string::npos || end > to) return "unterminated entity";
        const std::string ent = s.substr(k + 1, end - k - 1);
        static const std::set<std::string> known{"amp", "lt", "gt", "quot", "apos"};
        if (!known.count(ent) && !(ent.size() > 1 && ent[0] == '#')) return "unknown entity &" + ent + ";";
      }
    }
    return "";
  };
  if (s.rfind("<?xml", 0) == 0) i = s.find("?>") + 2;
  while (i < s.size()) {
    const auto lt = s.find('<', i);
    const auto text_end = lt == std::string::npos ? s.size() : lt;
    if (auto p = check_text(i, text_end); !p.empty()) return p;
    if (stack.empty()) {
      for (std::size_t k = i; k < text_end; ++k) {
        if (!std::isspace(static_cast<unsigned char>(s[k]))) return "text outside the root element";
      }
    }
    if (lt == std::string::npos) break;
    const auto gt = s.find('>', lt);
    if (gt == std::string::npos) return "unterminated tag";
    std::string tag = s.substr(lt + 1, gt - lt - 1);
    if (!tag.empty() && tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return "mismatched closing tag </" + name + ">";
      stack.pop_back();
    } else {
      const bool self = !tag.empty() && tag.back() == '/';
      if (self) tag.pop_back();
      std::size_t k = 0;
      while (k < tag.size() && is_name(tag[k])) ++k;
      const std::string name = tag.substr(0, k);
      if (name.empty()) return "empty tag name";
      std::set<std::string> attrs;
      while (k < tag.size()) {
        while (k < tag.size() && std::isspace(static_cast<unsigned char>(tag[k]))) ++k;
        if (k >= tag.size()) break;
        const auto a0 = k;
        while (k < tag.size() && is_name(tag[k])) ++k;
        const std::string attr = tag.substr(a0, k - a0);
        if (attr.empty() || k >= tag.size() || tag[k] != '=' || k + 1 >= tag.size() || tag[k + 1] != '"') {
          return "malformed attribute in <" + name + ">";
        }
        const auto close = tag.find('"', k + 2);
        if (close == std::string::npos) return "unterminated attribute value";
        if (auto p = check_text(lt + 1 + k + 2, lt + 1 + close); !p.empty()) return p;
        if (!attrs.insert(attr).second) return "duplicate attribute " + attr;
        k = close + 1;
      }
      if (stack.empty()) ++roots;
      if (!self) stack.push_back(name);
    }
    i = gt + 1;
  }
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  if (roots != 1) return "expected exactly one root element";
  return "";
}

// Elements and attributes the renderer may emit, all from the SVG 1.1 vocabulary.
inline std::string svg11_problem(const std::string& s) {
  static const std::set<std::string> elements{"svg", "defs", "filter", "feGaussianBlur", "feMerge", "feMergeNode",
                                              "g", "rect", "text", "tspan", "line", "circle", "path", "title"};
  static const std::set<std::string> attributes{
      "xmlns", "version", "width", "height", "viewBox", "id", "class", "x", "y", "transform", "fill", "stroke",
      "stroke-width", "font-family", "font-size", "font-weight", "in", "stdDeviation", "result", "x1", "y1", "x2",
      "y2", "cx", "cy", "r", "filter", "stroke-dasharray", "opacity", "d", "fill-opacity", "stroke-opacity"};
  if (s.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") == std::string::npos) {
    return "missing SVG 1.1 root";
  }
  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    ++i;
    if (s[i] == '/' || s[i] == '?') continue;
    std::size_t k = i;
    while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])))) ++k;
    const std::string name = s.substr(i, k - i);
    if (!elements.count(name)) return "unexpected element <" + name + ">";
    const auto gt = s.find('>', k);
    std::size_t a = k;
    while (a < gt) {
      const auto eq = s.find('=', a);
      if (eq == std::string::npos || eq > gt) break;
      std::size_t b = eq;
      while (b > a && s[b - 1] != ' ') --b;
      const std::string attr = s.substr(b, eq - b);
      if (!attributes.count(attr)) return "unexpected attribute " + attr + " on <" + name + ">";
      a = s.find('"', s.find('"', eq) + 1) + 1;
    }
  }
  return "";
}

// Independent evaluation: every element becomes a string key with a dense attribute map.
inline double oracle_distance(const Graph& a, const Graph& b) {
  auto elements = [](const Graph& g) {
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [id, n] : g.nodes()) {
      auto& m = out["node:" + id];
      for (const auto& [k, v] : n.attrs.entries()) m[k] = v;
    }
    for (const auto& [key, l] : g.links()) {
      auto& m = out["link:" + key.source + "|" + key.target];
      for (const auto& [k, v] : l.attrs.entries()) m[k] = v;
    }
    return out;
  };
  const auto ea = elements(a), eb = elements(b);
  std::set<std::string> all;
  for (const auto& [k, v] : ea) all.insert(k);
  for (const auto& [k, v] : eb) all.insert(k);
  if (all.empty()) return 0.0;
  double common = 0.0;
  for (const auto& e : all) {
    auto ia = ea.find(e), ib = eb.find(e);
    if (ia == ea.end() || ib == eb.end()) continue;
    std::set<std::string> keys;
    for (const auto& [k, v] : ia->second) keys.insert(k);
    for (const auto& [k, v] : ib->second) keys.insert(k);
    double mn = 0.0, mx = 0.0;
    for (const auto& k : keys) {
      const double x = ia->second.count(k) ? ia->second.at(k) : 0.0;
      const double y = ib->second.count(k) ? ib->second.at(k) : 0.0;
      mn += std::min(x, y);
      mx += std::max(x, y);
    }
    common += mx == 0.0 ? 1.0 : mn / mx;
  }
  return 1.0 - common / static_cast<double>(all.size());
}


struct OracleMerge {
  Span left, right;
  double raw;
};

// Rebuilds every group from its snapshots and recomputes every adjacent distance at every step;
// the leftmost minimum wins, with values within 1e-12 treated as ties.
inline std::vector<OracleMerge> oracle_merges(const DynamicGraph& dg) {
  std::vector<Span> groups;
  for (int t = 0; t <= dg.last_time(); ++t) groups.push_back({t, t});
  auto graph_of = [&](Span s) {
    Graph g = dg.snapshots[static_cast<std::size_t>(s.start)].graph;
    for (int t = s.start + 1; t <= s.end; ++t) g = union_graph(g, dg.snapshots[static_cast<std::size_t>(t)].graph, Aggregation::sum);
    return g;
  };
  std::vector<OracleMerge> out;
  while (groups.size() > 1) {
    std::size_t best = 0;
    double best_d = 2.0;
    for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
      const double d = oracle_distance(graph_of(groups[i]), graph_of(groups[i + 1]));
      if (d < best_d - 1e-12) {
        best_d = d;
        best = i;
      }
    }
    out.push_back({groups[best], groups[best + 1], best_d});
    groups[best] = {groups[best].start, groups[best + 1].end};
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return out;
}

// Two K5 cliques (n00..n04, n05..n09) joined by the n04-n05 bridge.
inline Graph barbell() {
  Graph g(false);
  for (int i = 0; i < 10; ++i) g.add_node(Node{node_name(i), {}, {}, {}});
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) g.add_link(node_name(5 * side + i), node_name(5 * side + j), {{"weight", 1.0}});
    }
  }
  g.add_link("n04", "n05", {{"weight", 1.0}});
  return g;
}

// Newman modularity from a dense symmetric weight matrix.
inline double oracle_modularity(const std::vector<std::vector<double>>& w, const std::vector<int>& membership) {
  const std::size_t n = w.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += w[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (membership[i] == membership[j]) q += w[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

inline std::vector<std::vector<double>> dense_weights(const Graph& g) {
  std::vector<std::string> ids;
  for (const auto& [id, n] : g.nodes()) ids.push_back(id);
  std::vector<std::vector<double>> w(ids.size(), std::vector<double>(ids.size(), 0.0));
  auto at = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (const auto& [key, l] : g.links()) {
    w[at(key.source)][at(key.target)] += l.weight();
    w[at(key.target)][at(key.source)] += l.weight();
  }
  return w;
}

struct BestPartition {
  std::vector<int> membership;
  double modularity = 0.0;
  int ties = 0;  // partitions within 1e-12 of the optimum
};

// Exhaustive search over every set partition (restricted growth strings).
inline BestPartition brute_force_modularity(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  BestPartition best;
  best.modularity = -1.0;
  if (n == 0) return best;
  std::vector<int> rgs(n, 0), maxes(n, 0);
  while (true) {
    const double q = oracle_modularity(w, rgs);
    if (q > best.modularity + 1e-12) {
      best = {rgs, q, 1};
    } else if (q > best.modularity - 1e-12) {
      ++best.ties;
    }
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] == maxes[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    maxes[i] = std::max(maxes[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxes[j] = maxes[i];
    }
  }
  return best;
}

// Canonical form: relabel communities by first occurrence.
inline std::vector<int> canonical_membership(const std::vector<int>& m) {
  std::vector<int> out(m.size());
  std::vector<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == m[i]; });
    if (it == seen.end()) {
      seen.push_back({m[i], static_cast<int>(seen.size())});
      out[i] = seen.back().second;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

struct EventFixture {
  std::string name;
  std::vector<CommunityPartition> partitions;
  std::vector<CommunityEvent> expected;
};

// One fixture per archetype; each forces exactly one event beside an unchanged anchor {X,Y}.
inline std::vector<EventFixture> event_fixtures() {
  using G = std::vector<std::vector<std::string>>;
  auto two = [](G a, G b) {
    a.push_back({"X", "Y"});
    b.push_back({"X", "Y"});
    return std::vector<CommunityPartition>{partition_from_groups(0, a), partition_from_groups(1, b)};
  };
  return {
      {"birth", two({}, {{"C", "D"}}), {{1, "1:C", Archetype::birth}}},
      {"death", two({{"C", "D"}}, {}), {{0, "0:C", Archetype::death}}},
      {"growth", two({{"A", "B", "C", "D", "E"}}, {{"A", "B", "C", "D", "E", "F"}}), {{1, "1:A", Archetype::growth}}},
      {"contraction", two({{"A", "B", "C", "D", "E"}}, {{"A", "B", "C", "D"}}), {{1, "1:A", Archetype::contraction}}},
      {"merge", two({{"A", "B"}, {"C", "D"}}, {{"A", "B", "C", "D"}}), {{1, "1:A", Archetype::merge}}},
      {"split", two({{"A", "B", "C", "D"}}, {{"A", "B", "E", "F"}, {"C", "D", "G", "H"}}), {{0, "0:A", Archetype::split}}},
  };
}

}  // namespace dgc::testing
