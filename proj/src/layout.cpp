#include "dgcomics/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"

namespace dgc {

int tier_count(int n) { return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))))); }

namespace {

struct Bounds {
  long lo = 0;
  long hi = 0;
};

// feasible[j][i]: panels i..n-1 split into j runs, each sum in [lo, hi].
std::vector<std::vector<char>> suffix_feasibility(const std::vector<long>& prefix, std::size_t tiers, Bounds b) {
  const std::size_t n = prefix.size() - 1;
  std::vector<std::vector<char>> f(tiers + 1, std::vector<char>(n + 1, 0));
  f[0][n] = 1;
  for (std::size_t j = 1; j <= tiers; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = i + 1; e <= n; ++e) {
        const long s = prefix[e] - prefix[i];
        if (s > b.hi) break;
        if (s >= b.lo && f[j - 1][e]) {
          f[j][i] = 1;
          break;
        }
      }
    }
  }
  return f;
}

// Smallest achievable max run sum with every run >= lo, or LONG_MAX.
long min_max_given_floor(const std::vector<long>& prefix, std::size_t tiers, long lo) {
  const std::size_t n = prefix.size() - 1;
  constexpr long inf = std::numeric_limits<long>::max();
  std::vector<long> prev(n + 1, inf);
  std::vector<long> cur(n + 1, inf);
  prev[0] = 0;
  for (std::size_t j = 1; j <= tiers; ++j) {
    std::fill(cur.begin(), cur.end(), inf);
    for (std::size_t e = j; e <= n; ++e) {
      for (std::size_t s = j - 1; s < e; ++s) {
        if (prev[s] == inf) continue;
        const long run = prefix[e] - prefix[s];
        if (run < lo) break;  // s grows -> run shrinks
        cur[e] = std::min(cur[e], std::max(prev[s], run));
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

std::vector<std::size_t> assign_tiers(std::span<const int> timespans, int tiers) {
  const std::size_t n = timespans.size();
  if (n == 0) throw ValidationError("cannot lay out zero panels");
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(tiers, 1)), 1, n);
  std::vector<long> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + timespans[i];
  const long total = prefix[n];

  // Candidate floors: every distinct run sum not above the mean.
  std::vector<long> floors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = i + 1; e <= n; ++e) {
      const long s = prefix[e] - prefix[i];
      if (s * static_cast<long>(k) > total) break;
      floors.push_back(s);
    }
  }
  std::sort(floors.begin(), floors.end());
  floors.erase(std::unique(floors.begin(), floors.end()), floors.end());

  // The largest run is at least total/k, so a floor further below the mean than the
  // best imbalance found so far cannot improve on it.
  constexpr long none = std::numeric_limits<long>::max();
  Bounds best{0, none};
  for (auto it = floors.rbegin(); it != floors.rend(); ++it) {
    const long lo = *it;
    if (best.hi != none && total - lo * static_cast<long>(k) > (best.hi - best.lo) * static_cast<long>(k)) break;
    const long hi = min_max_given_floor(prefix, k, lo);
    if (hi == none) continue;
    if (best.hi == none || hi - lo < best.hi - best.lo || (hi - lo == best.hi - best.lo && hi < best.hi)) {
      best = {lo, hi};
    }
  }

  // Fill each tier as far as the remaining panels still admit a valid split.
  const auto feasible = suffix_feasibility(prefix, k, best);
  std::vector<std::size_t> starts;
  std::size_t i = 0;
  for (std::size_t t = 0; t < k; ++t) {
    starts.push_back(i);
    const std::size_t left = k - t - 1;
    std::size_t chosen = n;
    for (std::size_t e = n; e > i; --e) {
      const long s = prefix[e] - prefix[i];
      if (s >= best.lo && s <= best.hi && feasible[left][e]) {
        chosen = e;
        break;
      }
    }
    i = chosen;
  }
  return starts;
}

ComicLayout layout_panels(std::span<const int> timespans, const PanelLayoutOptions& opts) {
  if (timespans.empty()) throw ValidationError("cannot lay out zero panels");
  for (int s : timespans) {
    if (s <= 0) throw ValidationError(fmt::format("panel timespan must be positive, got {}", s));
  }
  const int n = static_cast<int>(timespans.size());
  const double g = opts.gutter;
  int tiers = tier_count(n);
  double tier_h = opts.tier_height;
  if (opts.canvas_height) {
    const double floor_h = *opts.canvas_height / 6.0;
    auto height_for = [&](int t) { return (*opts.canvas_height - (t + 1) * g) / t; };
    while (tiers > 1 && height_for(tiers) < floor_h) --tiers;
    tier_h = height_for(tiers);
  }

  ComicLayout out;
  out.tiers = tiers;
  out.gutter = g;
  out.canvas_width = opts.canvas_width;
  out.canvas_height = opts.canvas_height ? *opts.canvas_height : tiers * tier_h + (tiers + 1) * g;
  out.panels.resize(timespans.size());

  const auto starts = assign_tiers(timespans, tiers);
  for (std::size_t t = 0; t < starts.size(); ++t) {
    const std::size_t begin = starts[t];
    const std::size_t end = t + 1 < starts.size() ? starts[t + 1] : timespans.size();
    long sum = 0;
    for (std::size_t i = begin; i < end; ++i) sum += timespans[i];
    const double usable = opts.canvas_width - static_cast<double>(end - begin + 1) * g;
    double x = g;
    const double y = g + static_cast<double>(t) * (tier_h + g);
    for (std::size_t i = begin; i < end; ++i) {
      const double w = usable * static_cast<double>(timespans[i]) / static_cast<double>(sum);
      out.panels[i] = {static_cast<int>(t), x, y, w, tier_h};
      x += w + g;
    }
  }
  return out;
}

LayoutMode parse_layout_mode(std::string_view s) {
  if (s == "force") return LayoutMode::force;
  if (s == "compact") return LayoutMode::compact;
  if (s == "fixed") return LayoutMode::fixed;
  throw ValidationError(fmt::format("unknown layout mode '{}' (expected force|compact|fixed)", s));
}

std::string_view to_string(LayoutMode m) {
  switch (m) {
    case LayoutMode::force: return "force";
    case LayoutMode::compact: return "compact";
    case LayoutMode::fixed: return "fixed";
  }
  return "force";
}

}  // namespace dgc
