// Serial reference kernels against their OpenMP counterparts.
#include <random>

#include <benchmark/benchmark.h>

#include "dgcomics/kernels.hpp"

namespace {

dgc::Graph random_graph(int nodes, int links, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  std::uniform_real_distribution<double> w(1.0, 5.0);
  dgc::Graph g;
  for (int i = 0; i < nodes; ++i) g.add_node({"n" + std::to_string(i), {{"papers", w(rng)}}, {}, {}});
  for (int i = 0; i < links; ++i) {
    const int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const auto key = dgc::make_link_key("n" + std::to_string(a), "n" + std::to_string(b), false);
    g.put_link({key, {{"weight", w(rng)}}});
  }
  return g;
}

struct Pairs {
  std::vector<dgc::Graph> graphs;
  std::vector<dgc::GraphPair> pairs;
};

Pairs make_pairs(int n) {
  Pairs p;
  for (int i = 0; i <= n; ++i) p.graphs.push_back(random_graph(300, 1200, 17u + static_cast<std::uint32_t>(i)));
  for (int i = 0; i < n; ++i) p.pairs.push_back({&p.graphs[i], &p.graphs[i + 1]});
  return p;
}

void BM_BatchDistancesSerial(benchmark::State& state) {
  const auto p = make_pairs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dgc::kernels::serial::batch_distances(p.pairs, {}));
}
void BM_BatchDistancesOmp(benchmark::State& state) {
  const auto p = make_pairs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dgc::kernels::omp::batch_distances(p.pairs, {}));
}
BENCHMARK(BM_BatchDistancesSerial)->Arg(32);
BENCHMARK(BM_BatchDistancesOmp)->Arg(32);

void BM_EgoChangeSerial(benchmark::State& state) {
  const auto a = random_graph(400, 1600, 3), b = random_graph(400, 1600, 4);
  std::vector<std::string> ids;
  for (const auto& [id, n] : a.nodes()) ids.push_back(id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dgc::kernels::serial::ego_change_scores(ids, a, b, dgc::EgoLevel::one_and_half, {}));
  }
}
void BM_EgoChangeOmp(benchmark::State& state) {
  const auto a = random_graph(400, 1600, 3), b = random_graph(400, 1600, 4);
  std::vector<std::string> ids;
  for (const auto& [id, n] : a.nodes()) ids.push_back(id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgc::kernels::omp::ego_change_scores(ids, a, b, dgc::EgoLevel::one_and_half, {}));
  }
}
BENCHMARK(BM_EgoChangeSerial);
BENCHMARK(BM_EgoChangeOmp);

std::vector<dgc::Vec2> points(int n) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 400.0);
  std::vector<dgc::Vec2> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = {u(rng), u(rng)};
  return p;
}

void BM_RepulsionSerial(benchmark::State& state) {
  const auto p = points(static_cast<int>(state.range(0)));
  std::vector<dgc::Vec2> f(p.size());
  for (auto _ : state) {
    dgc::kernels::serial::repulsion(p, 1500.0, f);
    benchmark::DoNotOptimize(f.data());
  }
}
void BM_RepulsionOmp(benchmark::State& state) {
  const auto p = points(static_cast<int>(state.range(0)));
  std::vector<dgc::Vec2> f(p.size());
  for (auto _ : state) {
    dgc::kernels::omp::repulsion(p, 1500.0, f);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_RepulsionSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_RepulsionOmp)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
