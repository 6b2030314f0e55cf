#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dgcomics/errors.hpp"
#include "dgcomics/metrics.hpp"
#include "support.hpp"

using namespace dgc;

namespace {

Graph star(int leaves) {
  Graph g;
  g.add_node({"hub", {}, {}, {}});
  for (int i = 0; i < leaves; ++i) {
    const auto id = "l" + std::to_string(i);
    g.add_node({id, {}, {}, {}});
    g.add_link("hub", id, {{"weight", 1.0}});
  }
  return g;
}

double sum(const std::map<std::string, double>& m) {
  return std::accumulate(m.begin(), m.end(), 0.0, [](double s, const auto& kv) { return s + kv.second; });
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("degree and total link weight") {
  const auto dg = testing::tri();
  const auto deg = degree(dg.snapshots[1].graph);
  CHECK(deg.at("A") == 2.0);
  CHECK(deg.at("B") == 1.0);
  const auto w = total_link_weight(dg.snapshots[1].graph);
  CHECK(w.at("A") == 3.0);
  CHECK(w.at("B") == 2.0);
}

TEST_CASE("pagerank is a distribution and favours the hub") {
  const auto pr = pagerank(star(5));
  CHECK(sum(pr) == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 0; i < 5; ++i) CHECK(pr.at("hub") > pr.at("l" + std::to_string(i)));
  // On a cycle every node gets the same rank.
  Graph cycle;
  for (const char* n : {"a", "b", "c", "d"}) cycle.add_node({n, {}, {}, {}});
  cycle.add_link("a", "b", {{"weight", 1.0}});
  cycle.add_link("b", "c", {{"weight", 1.0}});
  cycle.add_link("c", "d", {{"weight", 1.0}});
  cycle.add_link("d", "a", {{"weight", 1.0}});
  for (const auto& [id, v] : pagerank(cycle)) CHECK(v == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("eigenvector centrality of a star") {
  // Principal eigenvector of a k-leaf star: hub sqrt(k) times each leaf.
  const auto ev = eigenvector_centrality(star(4));
  CHECK(ev.at("hub") / ev.at("l0") == doctest::Approx(2.0).epsilon(1e-6));
  double norm = 0.0;
  for (const auto& [id, v] : ev) norm += v * v;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("metric series has gaps where the node is absent") {
  const auto dg = testing::tri();
  const auto s = node_metric_series(dg, "B", Metric::degree);
  REQUIRE(s.size() == 3);
  CHECK(*s[0] == 1.0);
  CHECK(*s[1] == 1.0);
  CHECK_FALSE(s[2].has_value());
  CHECK(parse_metric("weight") == Metric::total_link_weight);
  CHECK_THROWS_AS(parse_metric("betweenness"), ValidationError);
}

}
