#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgcomics/clustering.hpp"
#include "dgcomics/community.hpp"
#include "dgcomics/graph.hpp"
#include "dgcomics/layout.hpp"
#include "dgcomics/narrative.hpp"

namespace dgc {

inline constexpr const char* kTemplateSchema = "dgcomic/1";

enum class NodeRole { main, supporter, plain };
enum class ElementState { added, deleted, preserved };
std::string_view to_string(NodeRole r);
std::string_view to_string(ElementState s);

struct PanelNode {
  std::string id;
  std::string label;
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;  // total weight of the panel's links at this node
  NodeRole role = NodeRole::plain;
  ElementState state = ElementState::preserved;
  int color = -1;  // palette index for main characters
};

struct PanelLink {
  LinkKey key;
  double weight = 0.0;
  ElementState state = ElementState::preserved;
};

// A translucent hull drawn behind a community's members.
struct Overlay {
  std::string community;
  std::vector<std::string> members;
};

struct Panel {
  Span span;
  std::string span_start;
  std::string span_end;
  bool transition = false;  // built from two child clusters (diff panel)
  PanelLayout frame;        // insets: relative to the parent panel's origin
  std::vector<std::string> mains;
  std::vector<PanelNode> nodes;  // sorted by id
  std::vector<PanelLink> links;  // sorted by key
  Caption caption;
  std::vector<Overlay> overlays;
  std::vector<Panel> insets;

  std::string span_label() const { return span_start == span_end ? span_start : span_start + "–" + span_end; }
  const PanelNode* find_node(std::string_view id) const;
};

struct RoleStyle {
  std::string fill;
  std::string stroke;
  double stroke_width = 1.0;
  bool label = false;
  std::string dash;    // stroke-dasharray, empty for solid
  bool glow = false;   // blur-glow filter
  double opacity = 1.0;
};

struct StyleOverride {
  std::optional<std::string> color;
  std::optional<double> radius;
  bool hidden = false;
};

struct StyleSpec {
  RoleStyle main;
  RoleStyle supporter;
  RoleStyle plain;
  RoleStyle added;    // applied on top of the node/link role
  RoleStyle deleted;  // applied on top of the node/link role
  std::vector<std::string> palette;  // diverging palette for main characters
  std::map<std::string, StyleOverride> overrides;  // keyed by node id

  static StyleSpec defaults();
};

struct ComicParams {
  std::optional<double> level;
  std::optional<int> k;
  std::string scope = "whole";  // "whole" | "ego:<node>"
  EgoLevel ego = EgoLevel::one_and_half;
  double top = 15.0;
  double highlight = 5.0;
  LayoutMode layout = LayoutMode::force;
  std::vector<std::string> mains;  // empty: pick automatically
  int auto_mains = 1;
  Aggregation agg = Aggregation::sum;
  double canvas_width = 1200.0;

  // Throws ValidationError on conflicting or out-of-range values.
  void validate() const;
};

struct ComicTemplate {
  std::string schema = kTemplateSchema;
  std::string dataset;
  ComicParams params;
  double width = 0.0;
  double height = 0.0;
  double gutter = 0.0;
  int tiers = 0;
  double frame_width = 400.0;   // graph layout frame
  double frame_height = 300.0;
  StyleSpec style;
  std::vector<Panel> panels;
};

struct GenerateOptions {
  CaptionTemplates captions;
  ForceParams force;
  Exec exec = Exec::parallel;
};

Cut resolve_cut(const Dendrogram& d, const ComicParams& params);

// Cut the dendrogram, pick characters, build diff panels, captions and layouts.
ComicTemplate generate_comic(const DynamicGraph& dg, const std::string& dataset_id, const Dendrogram& d,
                             const ComicParams& params, const GenerateOptions& opts = {});

// Cluster spans with their automatic main characters (the cut endpoint's payload).
nlohmann::ordered_json cut_summary(const DynamicGraph& dg, const Dendrogram& d, const Cut& c, EgoLevel level,
                                   int auto_mains, const CharacterOptions& opts = {});

// Replace panel `index` by single-time panels for `times` (must lie inside its span).
void timeline_replace(ComicTemplate& comic, const DynamicGraph& dg, std::size_t index, std::vector<int> times,
                      const GenerateOptions& opts = {});
// Attach single-time insets in the bottom-right corner of panel `index`.
void timeline_add(ComicTemplate& comic, const DynamicGraph& dg, std::size_t index, std::vector<int> times,
                  const GenerateOptions& opts = {});

// One overlay per character and panel: the character's community at the panel's last time,
// restricted to the panel's nodes. Replaces existing overlays.
void add_community_overlays(ComicTemplate& comic, const CommunityTimeline& timeline,
                            const std::vector<std::string>& characters);

// Recompute panel frames, graph positions and main-character colors.
void layout_comic(ComicTemplate& comic, const DynamicGraph& dg, const GenerateOptions& opts = {});

nlohmann::ordered_json to_json(const ComicParams& p);
ComicParams params_from_json(const nlohmann::json& j, const std::string& path = "");
nlohmann::ordered_json to_json(const ComicTemplate& t);
ComicTemplate template_from_json(const nlohmann::json& j);
std::string dump_template(const ComicTemplate& t);

}  // namespace dgc
