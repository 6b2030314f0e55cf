#include <algorithm>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"
#include "dgcomics/layout.hpp"

namespace dgc {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Vec2 seed_position(std::string_view id, const ForceParams& p) {
  const std::uint64_t h = fnv1a(id);
  const double u = static_cast<double>(h & 0xffffffffULL) / 4294967296.0;
  const double v = static_cast<double>(h >> 32) / 4294967296.0;
  const double mx = p.margin * p.frame_width;
  const double my = p.margin * p.frame_height;
  return {mx + u * (p.frame_width - 2 * mx), my + v * (p.frame_height - 2 * my)};
}

struct Box {
  double min_x, min_y, max_x, max_y;
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

Box bounds(const std::vector<Vec2>& pos) {
  Box b{pos[0].x, pos[0].y, pos[0].x, pos[0].y};
  for (const auto& q : pos) {
    b.min_x = std::min(b.min_x, q.x);
    b.min_y = std::min(b.min_y, q.y);
    b.max_x = std::max(b.max_x, q.x);
    b.max_y = std::max(b.max_y, q.y);
  }
  return b;
}

GraphLayout to_layout(const Graph& g, const std::vector<Vec2>& pos) {
  GraphLayout out;
  out.reserve(pos.size());
  std::size_t i = 0;
  for (const auto& [id, node] : g.nodes()) {
    out.push_back({id, pos[i].x, pos[i].y, false});
    ++i;
  }
  return out;
}

std::vector<Vec2> simulate(const Graph& g, const ForceParams& p, Exec exec) {
  const std::size_t n = g.nodes().size();
  std::vector<Vec2> pos;
  pos.reserve(n);
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto& [id, node] : g.nodes()) {
    index[id] = pos.size();
    pos.push_back(seed_position(id, p));
  }
  if (n == 0) return pos;

  struct Spring {
    std::size_t a, b;
    double k;
  };
  std::vector<Spring> springs;
  double max_w = 0.0;
  for (const auto& [key, link] : g.links()) max_w = std::max(max_w, link.weight());
  for (const auto& [key, link] : g.links()) {
    springs.push_back({index[key.source], index[key.target], p.attraction * link.weight() / max_w});
  }

  const double cx = p.frame_width / 2.0;
  const double cy = p.frame_height / 2.0;
  std::vector<Vec2> force(n);
  for (int it = 0; it < p.iterations; ++it) {
    const double alpha = std::max(0.02, 1.0 - static_cast<double>(it) / p.iterations);
    std::fill(force.begin(), force.end(), Vec2{});
    kernels::repulsion(pos, p.repulsion, force, exec);
    for (const auto& s : springs) {
      const double dx = pos[s.b].x - pos[s.a].x;
      const double dy = pos[s.b].y - pos[s.a].y;
      const double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-6);
      const double f = s.k * (d - p.link_distance);
      force[s.a].x += f * dx / d;
      force[s.a].y += f * dy / d;
      force[s.b].x -= f * dx / d;
      force[s.b].y -= f * dy / d;
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sx = force[i].x * alpha;
      double sy = force[i].y * alpha;
      const double len = std::sqrt(sx * sx + sy * sy);
      if (len > p.max_step) {
        sx *= p.max_step / len;
        sy *= p.max_step / len;
      }
      pos[i].x += sx;
      pos[i].y += sy;
      mean_x += pos[i].x;
      mean_y += pos[i].y;
    }
    // Centering: translate so the centroid sits at the frame centre.
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    for (auto& q : pos) {
      q.x += cx - mean_x;
      q.y += cy - mean_y;
    }
  }

  const Box b = bounds(pos);
  const double avail_w = p.frame_width * (1.0 - 2.0 * p.margin);
  const double avail_h = p.frame_height * (1.0 - 2.0 * p.margin);
  if (b.width() > avail_w || b.height() > avail_h) {
    const double s = std::min(b.width() > 0 ? avail_w / b.width() : 1.0, b.height() > 0 ? avail_h / b.height() : 1.0);
    const double bx = (b.min_x + b.max_x) / 2.0;
    const double by = (b.min_y + b.max_y) / 2.0;
    for (auto& q : pos) {
      q.x = cx + (q.x - bx) * s;
      q.y = cy + (q.y - by) * s;
    }
  }
  return pos;
}

}  // namespace

GraphLayout force_layout(const Graph& g, const ForceParams& p, Exec exec) { return to_layout(g, simulate(g, p, exec)); }

GraphLayout compact_layout(const Graph& g, const ForceParams& p, Exec exec) {
  std::vector<Vec2> pos = simulate(g, p, exec);
  if (pos.empty()) return {};
  const double mx = p.margin * p.frame_width;
  const double my = p.margin * p.frame_height;
  const Box b = bounds(pos);
  for (auto& q : pos) {
    q.x = b.width() > 0 ? mx + (q.x - b.min_x) / b.width() * (p.frame_width - 2 * mx) : p.frame_width / 2.0;
    q.y = b.height() > 0 ? my + (q.y - b.min_y) / b.height() * (p.frame_height - 2 * my) : p.frame_height / 2.0;
  }
  for (int pass = 0; pass < 50; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = i + 1; j < pos.size(); ++j) {
        double dx = pos[j].x - pos[i].x;
        double dy = pos[j].y - pos[i].y;
        double d = std::sqrt(dx * dx + dy * dy);
        if (d >= p.min_distance) continue;
        double push = (p.min_distance - d) / 2.0;
        if (d < 1e-9) {
          const double angle = static_cast<double>(i * 7 + j) * 0.7;
          dx = std::cos(angle);
          dy = std::sin(angle);
        } else {
          dx /= d;
          dy /= d;
        }
        pos[i].x -= dx * push;
        pos[i].y -= dy * push;
        pos[j].x += dx * push;
        pos[j].y += dy * push;
        moved = true;
      }
    }
    for (auto& q : pos) {
      q.x = std::clamp(q.x, mx, p.frame_width - mx);
      q.y = std::clamp(q.y, my, p.frame_height - my);
    }
    if (!moved) break;
  }
  return to_layout(g, pos);
}

GraphLayout layout_graph(const Graph& g, LayoutMode mode, const GraphLayout* basis, const ForceParams& p, Exec exec) {
  switch (mode) {
    case LayoutMode::force: return force_layout(g, p, exec);
    case LayoutMode::compact: return compact_layout(g, p, exec);
    case LayoutMode::fixed: break;
  }
  if (!basis) throw ValidationError("fixed layout mode needs a basis layout");
  GraphLayout out;
  out.reserve(g.nodes().size());
  for (const auto& [id, node] : g.nodes()) {
    auto it = std::lower_bound(basis->begin(), basis->end(), id,
                               [](const NodePosition& a, const std::string& b) { return a.id < b; });
    if (it == basis->end() || it->id != id) {
      throw ValidationError(fmt::format("node '{}' is missing from the fixed layout basis", id));
    }
    out.push_back({id, it->x, it->y, true});
  }
  return out;
}

std::vector<GraphLayout> layout_graphs(std::span<const Graph> graphs, LayoutMode mode, const GraphLayout* basis,
                                       const ForceParams& p, Exec exec) {
  std::vector<GraphLayout> out(graphs.size());
  // Panels run in parallel; each simulation stays serial inside.
  for_each_index(graphs.size(), exec, [&](std::size_t i) { out[i] = layout_graph(graphs[i], mode, basis, p, Exec::serial); });
  return out;
}

}  // namespace dgc
