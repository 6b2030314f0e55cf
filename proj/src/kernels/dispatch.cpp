#include "dgcomics/kernels.hpp"

#ifdef DGCOMICS_HAVE_OPENMP
#include <omp.h>
#endif

namespace dgc::kernels {

namespace {
// Below these sizes thread start-up costs more than the loop.
constexpr std::size_t kMinParallelPairs = 4;
constexpr std::size_t kMinParallelNodes = 16;
constexpr std::size_t kMinParallelPoints = 64;

bool use_omp(Exec exec, std::size_t n, std::size_t threshold) {
#ifdef DGCOMICS_HAVE_OPENMP
  return exec == Exec::parallel && n >= threshold && omp_get_max_threads() > 1;
#else
  (void)exec, (void)n, (void)threshold;
  return false;
#endif
}
}  // namespace

std::vector<double> batch_distances(std::span<const GraphPair> pairs, const DistanceConfig& cfg, Exec exec) {
  return use_omp(exec, pairs.size(), kMinParallelPairs) ? omp::batch_distances(pairs, cfg)
                                                        : serial::batch_distances(pairs, cfg);
}

std::vector<double> ego_change_scores(std::span<const std::string> nodes, const Graph& before, const Graph& after,
                                      EgoLevel level, const DistanceConfig& cfg, Exec exec) {
  return use_omp(exec, nodes.size(), kMinParallelNodes) ? omp::ego_change_scores(nodes, before, after, level, cfg)
                                                        : serial::ego_change_scores(nodes, before, after, level, cfg);
}

void repulsion(std::span<const Vec2> pos, double strength, std::span<Vec2> force, Exec exec) {
  if (use_omp(exec, pos.size(), kMinParallelPoints)) {
    omp::repulsion(pos, strength, force);
  } else {
    serial::repulsion(pos, strength, force);
  }
}

int max_threads() {
#ifdef DGCOMICS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dgc::kernels
