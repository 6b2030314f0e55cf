#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgcomics/graph.hpp"
#include "dgcomics/similarity.hpp"

namespace dgc {

struct PanelLayout {
  int tier = 0;
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct PanelLayoutOptions {
  double canvas_width = 1200.0;
  // When set, tiers share this height and are reduced until each keeps canvas_height / 6.
  // When unset, every tier is tier_height tall and the canvas grows with the tier count.
  std::optional<double> canvas_height;
  double tier_height = 320.0;
  double gutter = 12.0;
};

struct ComicLayout {
  int tiers = 0;
  double canvas_width = 0.0;
  double canvas_height = 0.0;
  double gutter = 0.0;
  std::vector<PanelLayout> panels;  // same order as the input
};

// max(1, round(sqrt(n))).
int tier_count(int n);

// Contiguous split of `timespans` into `tiers` non-empty runs minimising
// (max tier sum - min tier sum), then the max tier sum; remaining ties fill earlier tiers first.
// Returns the index of the first panel of each tier.
std::vector<std::size_t> assign_tiers(std::span<const int> timespans, int tiers);

// Throws ValidationError for zero panels or non-positive timespans.
ComicLayout layout_panels(std::span<const int> timespans, const PanelLayoutOptions& opts = {});

enum class LayoutMode { force, compact, fixed };
LayoutMode parse_layout_mode(std::string_view s);
std::string_view to_string(LayoutMode m);

struct NodePosition {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  bool pinned = false;

  friend bool operator==(const NodePosition&, const NodePosition&) = default;
};

// Graph layouts live in a fixed frame; panels scale the frame uniformly into their graph area.
struct ForceParams {
  double frame_width = 400.0;
  double frame_height = 300.0;
  int iterations = 300;
  double link_distance = 50.0;
  double attraction = 0.48;   // spring constant at maximum link weight
  double repulsion = 9000.0;  // inverse-square coefficient
  double max_step = 25.0;
  double margin = 0.05;       // fraction of the frame kept free on each side
  double min_distance = 14.0; // compact mode
};

// Sorted by node id.
using GraphLayout = std::vector<NodePosition>;

// Seeded by a hash of each node id, so identical graphs give bit-identical layouts.
GraphLayout force_layout(const Graph& g, const ForceParams& p = {}, Exec exec = Exec::parallel);
// Force layout stretched to fill the frame (5% margin), then spread to a minimum pairwise distance.
GraphLayout compact_layout(const Graph& g, const ForceParams& p = {}, Exec exec = Exec::parallel);
// fixed mode requires `basis` (normally the force layout of the whole-timespan union graph).
GraphLayout layout_graph(const Graph& g, LayoutMode mode, const GraphLayout* basis = nullptr,
                         const ForceParams& p = {}, Exec exec = Exec::parallel);

// One layout per graph; graphs are laid out independently (in parallel under Exec::parallel).
std::vector<GraphLayout> layout_graphs(std::span<const Graph> graphs, LayoutMode mode, const GraphLayout* basis,
                                       const ForceParams& p = {}, Exec exec = Exec::parallel);

}  // namespace dgc
