#include <doctest.h>

#include <random>

#include "dgcomics/community.hpp"
#include "dgcomics/errors.hpp"
#include "support.hpp"

using namespace dgc;

namespace {

std::vector<int> louvain_membership(const Graph& g) {
  return testing::canonical_membership(louvain(WeightedAdjacency::from(g)).membership);
}

double jaccard(const Community& a, const Community& b) {
  std::set<std::string> sa(a.members.begin(), a.members.end()), sb(b.members.begin(), b.members.end());
  std::size_t common = 0;
  for (const auto& m : sa) common += sb.count(m);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

// Rule-by-rule event evaluation straight from pairwise Jaccard.
std::vector<CommunityEvent> oracle_events(const std::vector<CommunityPartition>& ps, double theta, double delta) {
  std::vector<CommunityEvent> out;
  const std::size_t last = ps.size() - 1;
  for (std::size_t t = 0; t < ps.size(); ++t) {
    for (const auto& c : ps[t].communities) {
      std::vector<const Community*> preds, succs;
      if (t > 0) {
        for (const auto& p : ps[t - 1].communities) {
          if (jaccard(p, c) >= theta) preds.push_back(&p);
        }
      }
      if (t < last) {
        for (const auto& s : ps[t + 1].communities) {
          if (jaccard(c, s) >= theta) succs.push_back(&s);
        }
      }
      const int time = ps[t].time;
      if (t > 0 && preds.empty()) out.push_back({time, c.id, Archetype::birth});
      if (t < last && succs.empty()) out.push_back({time, c.id, Archetype::death});
      if (preds.size() >= 2) out.push_back({time, c.id, Archetype::merge});
      if (succs.size() >= 2) out.push_back({time, c.id, Archetype::split});
      if (preds.size() == 1) {
        const double before = static_cast<double>(preds[0]->size());
        const double now = static_cast<double>(c.size());
        if (now >= before * (1.0 + delta) - 1e-9) out.push_back({time, c.id, Archetype::growth});
        if (now <= before * (1.0 - delta) + 1e-9) out.push_back({time, c.id, Archetype::contraction});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("community") {

TEST_CASE("barbell splits into its two cliques, matching exhaustive modularity search") {
  const Graph g = testing::barbell();
  const auto w = testing::dense_weights(g);
  const auto best = testing::brute_force_modularity(w);
  const std::vector<int> cliques{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(best.ties == 1);
  CHECK(best.membership == cliques);
  CHECK(louvain_membership(g) == cliques);
  const auto adj = WeightedAdjacency::from(g);
  CHECK(modularity(adj, cliques) == doctest::Approx(best.modularity).epsilon(1e-12));
  const auto parts = detect_communities(DynamicGraph{"b", false, {{0, "0", g}}}, {});
  REQUIRE(parts[0].communities.size() == 2);
  CHECK(parts[0].communities[0].id == "0:n00");
  CHECK(parts[0].communities[1].id == "0:n05");
}

TEST_CASE("library modularity agrees with the dense formula") {
  std::mt19937 rng(50);
  for (int i = 0; i < 50; ++i) {
    const Graph g = testing::random_graph(rng, 9, 0.9, 0.4, false);
    const auto adj = WeightedAdjacency::from(g);
    std::vector<int> m(adj.ids.size());
    for (auto& x : m) x = std::uniform_int_distribution<int>(0, 2)(rng);
    CHECK(modularity(adj, m) == doctest::Approx(testing::oracle_modularity(testing::dense_weights(g), m)).epsilon(1e-12));
  }
}

TEST_CASE("louvain phases never lower modularity and stay near the optimum on small graphs") {
  std::mt19937 rng(51);
  for (int i = 0; i < 60; ++i) {
    const Graph g = testing::random_graph(rng, 8, 0.9, 0.35, false);
    const auto adj = WeightedAdjacency::from(g);
    const auto r = louvain(adj);
    REQUIRE(r.membership.size() == adj.ids.size());
    for (std::size_t p = 1; p < r.modularity_per_phase.size(); ++p) {
      CHECK(r.modularity_per_phase[p] >= r.modularity_per_phase[p - 1] - 1e-12);
    }
    const auto best = testing::brute_force_modularity(testing::dense_weights(g));
    CHECK(modularity(adj, r.membership) <= best.modularity + 1e-12);
    CHECK(louvain(adj).membership == r.membership);
  }
}

TEST_CASE("detection examples") {
  Graph g(false);
  for (const char* n : {"a", "b", "c", "d", "e", "f"}) g.add_node(Node{n, {}, {}, {}});
  for (auto [x, y] : {std::pair{"a", "b"}, {"b", "c"}, {"a", "c"}, {"d", "e"}, {"e", "f"}, {"d", "f"}}) {
    g.add_link(x, y, {{"weight", 1.0}});
  }
  CHECK(louvain_membership(g) == std::vector<int>{0, 0, 0, 1, 1, 1});
  Graph one(false);
  one.add_node(Node{"solo", {}, {}, {}});
  const auto parts = detect_communities(DynamicGraph{"s", false, {{0, "0", one}}}, {});
  REQUIRE(parts[0].communities.size() == 1);
  CHECK(parts[0].communities[0].members == std::vector<std::string>{"solo"});
}

TEST_CASE("partitions cover every node exactly once") {
  std::mt19937 rng(52);
  const auto dg = testing::random_dynamic(rng, 6, 20);
  const auto parts = detect_communities(dg, {});
  for (std::size_t t = 0; t < parts.size(); ++t) {
    std::vector<std::string> all;
    for (const auto& c : parts[t].communities) all.insert(all.end(), c.members.begin(), c.members.end());
    std::sort(all.begin(), all.end());
    std::vector<std::string> ids;
    for (const auto& [id, n] : dg.snapshots[t].graph.nodes()) ids.push_back(id);
    CHECK(all == ids);
  }
  const auto serial = detect_communities(dg, {}, Exec::serial);
  for (std::size_t t = 0; t < parts.size(); ++t) {
    REQUIRE(serial[t].communities.size() == parts[t].communities.size());
    for (std::size_t c = 0; c < serial[t].communities.size(); ++c) {
      CHECK(serial[t].communities[c].members == parts[t].communities[c].members);
    }
  }
}

TEST_CASE("attribute method groups by category and names a missing node") {
  Graph g(false);
  g.add_node(Node{"a", {}, {}, {{"org", "x"}}});
  g.add_node(Node{"b", {}, {}, {{"org", "y"}}});
  g.add_node(Node{"c", {}, {}, {{"org", "x"}}});
  const DynamicGraph dg{"attr", false, {{0, "2001", g}}};
  const auto parts = detect_communities(dg, CommunityMethod::parse("attribute:org"));
  REQUIRE(parts[0].communities.size() == 2);
  CHECK(parts[0].communities[0].members == std::vector<std::string>{"a", "c"});
  g.add_node(Node{"d", {}, {}, {}});
  const DynamicGraph bad{"attr", false, {{0, "2001", g}}};
  try {
    detect_communities(bad, CommunityMethod::parse("attribute:org"));
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'d'") != std::string::npos);
  }
  CHECK_THROWS_AS(CommunityMethod::parse("spectral"), ValidationError);
  CHECK(CommunityMethod::parse("attribute:org").str() == "attribute:org");
}

TEST_CASE("matching examples") {
  const auto p = partition_from_groups(0, {{"A", "B", "C"}});
  const auto q = partition_from_groups(1, {{"B", "C", "D"}});
  const auto e = match_communities(p, q);
  REQUIRE(e.size() == 1);
  CHECK(e[0].jaccard == 0.5);
  CHECK(e[0].overlap == 2);
  CHECK(match_communities(p, partition_from_groups(1, {{"X"}})).empty());
  const auto same = match_communities(p, partition_from_groups(1, {{"A", "B", "C"}}));
  REQUIRE(same.size() == 1);
  CHECK(same[0].jaccard == 1.0);
  CHECK_THROWS_AS(match_communities(p, q, 0.0), ValidationError);
}

TEST_CASE("each forced archetype is reported alone") {
  for (const auto& f : testing::event_fixtures()) {
    INFO(f.name);
    CHECK(build_timeline(f.partitions).events == f.expected);
  }
}

TEST_CASE("stationary partitions produce no events") {
  std::vector<CommunityPartition> ps;
  for (int t = 0; t < 4; ++t) ps.push_back(partition_from_groups(t, {{"A", "B"}, {"C", "D", "E"}}));
  CHECK(build_timeline(ps).events.empty());
}

TEST_CASE("event classification matches rule evaluation on random timelines") {
  std::mt19937 rng(53);
  for (int i = 0; i < 300; ++i) {
    const int steps = std::uniform_int_distribution<int>(2, 5)(rng);
    std::vector<CommunityPartition> ps;
    for (int t = 0; t < steps; ++t) {
      std::map<int, std::vector<std::string>> groups;
      for (int n = 0; n < 10; ++n) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.8) {
          groups[std::uniform_int_distribution<int>(0, 3)(rng)].push_back(testing::node_name(n));
        }
      }
      std::vector<std::vector<std::string>> g;
      for (auto& [k, v] : groups) g.push_back(v);
      ps.push_back(partition_from_groups(t, g));
    }
    const double theta = i % 2 ? 0.1 : 0.3;
    const auto tl = build_timeline(ps, {theta, 0.2});
    CHECK(tl.events == oracle_events(ps, theta, 0.2));
    for (const auto& e : tl.successors) {
      CHECK(e.to.substr(0, e.to.find(':')) == std::to_string(e.time + 1));
    }
  }
}

TEST_CASE("character paths diverge after a split") {
  std::vector<CommunityPartition> ps{
      partition_from_groups(0, {{"K", "S", "x"}}),
      partition_from_groups(1, {{"K", "S", "x", "y"}}),
      partition_from_groups(2, {{"K", "x"}, {"S", "y"}}),
      partition_from_groups(3, {{"K", "x"}}),
  };
  const auto tl = build_timeline(ps);
  const auto paths = character_paths(tl, {"K", "S", "nobody"});
  const auto& k = paths.at("K");
  const auto& s = paths.at("S");
  REQUIRE(k.size() == 4);
  REQUIRE(s.size() == 3);
  CHECK(k[0].community == s[0].community);
  CHECK(k[1].community == s[1].community);
  CHECK(k[2].community != s[2].community);
  CHECK(paths.at("nobody").empty());
  CHECK(std::count(tl.events.begin(), tl.events.end(), CommunityEvent{1, "1:K", Archetype::split}) == 1);
  CHECK(std::count(tl.events.begin(), tl.events.end(), CommunityEvent{2, "2:S", Archetype::death}) == 1);
}

TEST_CASE("timeline JSON carries cells with size buckets") {
  const auto tl = build_timeline(testing::event_fixtures()[4].partitions);
  const auto j = to_json(tl, nullptr, 5);
  REQUIRE(j["cells"].size() == 5);
  for (const auto& c : j["cells"]) {
    CHECK(c["bucket"].get<int>() >= 0);
    CHECK(c["bucket"].get<int>() < 5);
  }
  CHECK(j["cells"][3]["size"] == 4);
  CHECK(j["cells"][3]["bucket"] == 4);
  CHECK(j["cells"][0]["bucket"] == 0);
  CHECK(j["events"][0]["type"] == "merge");
  CHECK(j["successors"].size() == 3);
}

}
