#pragma once

// Data-parallel inner loops. Every kernel has a plain-loop reference in
// kernels/serial.cpp and an OpenMP version in kernels/omp.cpp; the two must
// produce bit-identical results, which tests/test_kernels.cpp checks.

#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "dgcomics/graph.hpp"
#include "dgcomics/similarity.hpp"

namespace dgc {

struct GraphPair {
  const Graph* left = nullptr;
  const Graph* right = nullptr;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

namespace kernels {

namespace serial {
std::vector<double> batch_distances(std::span<const GraphPair> pairs, const DistanceConfig& cfg);
std::vector<double> ego_change_scores(std::span<const std::string> nodes, const Graph& before, const Graph& after,
                                      EgoLevel level, const DistanceConfig& cfg);
void repulsion(std::span<const Vec2> pos, double strength, std::span<Vec2> force);
}  // namespace serial

namespace omp {
std::vector<double> batch_distances(std::span<const GraphPair> pairs, const DistanceConfig& cfg);
std::vector<double> ego_change_scores(std::span<const std::string> nodes, const Graph& before, const Graph& after,
                                      EgoLevel level, const DistanceConfig& cfg);
void repulsion(std::span<const Vec2> pos, double strength, std::span<Vec2> force);
}  // namespace omp

// Dispatchers. Small inputs stay serial regardless of `exec`.
std::vector<double> batch_distances(std::span<const GraphPair> pairs, const DistanceConfig& cfg, Exec exec);
// Score of node v: graph_distance(ego(before, v), ego(after, v)).
std::vector<double> ego_change_scores(std::span<const std::string> nodes, const Graph& before, const Graph& after,
                                      EgoLevel level, const DistanceConfig& cfg, Exec exec);
// Inverse-square repulsion; force[i] accumulates over j in index order.
void repulsion(std::span<const Vec2> pos, double strength, std::span<Vec2> force, Exec exec);

int max_threads();

}  // namespace kernels

// Runs body(i) for i in [0, n). Bodies must only write to their own slot.
// The first exception thrown by any iteration is rethrown on the caller.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
  const long count = static_cast<long>(n);
#ifdef DGCOMICS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && count > 1)
#endif
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  (void)exec;
  if (error) std::rethrow_exception(error);
}

}  // namespace dgc
