#include <cmath>

#include "dgcomics/kernels.hpp"

namespace dgc::kernels::serial {

std::vector<double> batch_distances(std::span<const GraphPair> pairs, const DistanceConfig& cfg) {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = graph_distance(*pairs[i].left, *pairs[i].right, cfg);
  return out;
}

std::vector<double> ego_change_scores(std::span<const std::string> nodes, const Graph& before, const Graph& after,
                                      EgoLevel level, const DistanceConfig& cfg) {
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::set<std::string> ego{nodes[i]};
    out[i] = graph_distance(ego_network(before, ego, level), ego_network(after, ego, level), cfg);
  }
  return out;
}

void repulsion(std::span<const Vec2> pos, double strength, std::span<Vec2> force) {
  const std::size_t n = pos.size();
  for (std::size_t i = 0; i < n; ++i) {
    double fx = 0.0;
    double fy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double dx = pos[i].x - pos[j].x;
      double dy = pos[i].y - pos[j].y;
      double d2 = dx * dx + dy * dy;
      if (d2 < 1e-6) {
        // Coincident points: separate along a fixed index-dependent direction.
        const double angle = static_cast<double>(i < j ? i * 7 + j : j * 7 + i) * 0.7;
        dx = std::cos(angle) * (i < j ? 1.0 : -1.0);
        dy = std::sin(angle) * (i < j ? 1.0 : -1.0);
        d2 = 1.0;
      }
      const double d = std::sqrt(d2);
      const double f = strength / d2;
      fx += f * dx / d;
      fy += f * dy / d;
    }
    force[i].x += fx;
    force[i].y += fy;
  }
}

}  // namespace dgc::kernels::serial
