#include "dgcomics/comic.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/kernels.hpp"

namespace dgc {

std::string_view to_string(NodeRole r) {
  switch (r) {
    case NodeRole::main: return "main";
    case NodeRole::supporter: return "supporter";
    case NodeRole::plain: return "default";
  }
  return "default";
}

std::string_view to_string(ElementState s) {
  switch (s) {
    case ElementState::added: return "added";
    case ElementState::deleted: return "deleted";
    case ElementState::preserved: return "preserved";
  }
  return "preserved";
}

const PanelNode* Panel::find_node(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const PanelNode& n, std::string_view v) { return n.id < v; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

StyleSpec StyleSpec::defaults() {
  StyleSpec s;
  s.main = {"#b2182b", "#222222", 3.0, true, "", false, 1.0};
  s.supporter = {"#f4a582", "#444444", 1.5, true, "", false, 1.0};
  s.plain = {"#bdbdbd", "#666666", 1.0, false, "", false, 0.9};
  s.added = {"", "", 1.0, false, "", true, 1.0};
  s.deleted = {"", "", 1.0, false, "4 3", false, 0.6};
  s.palette = {"#b2182b", "#2166ac", "#d6604d", "#4393c3", "#f4a582", "#92c5de", "#8c510a", "#01665e"};
  return s;
}

void ComicParams::validate() const {
  if (level && k) throw ValidationError("cut level and cluster count k are mutually exclusive");
  if (level && !(*level >= 0.0 && *level <= 1.0)) throw ValidationError(fmt::format("cut level {} outside [0,1]", *level));
  if (k && *k < 1) throw ValidationError(fmt::format("cluster count {} must be >= 1", *k));
  if (!(top > 0.0 && top <= 100.0)) throw ValidationError(fmt::format("top percent {} outside (0,100]", top));
  if (!(highlight >= 0.0 && highlight <= top)) {
    throw ValidationError(fmt::format("highlight percent {} outside [0,{}]", highlight, top));
  }
  if (auto_mains < 1) throw ValidationError("automatic main character count must be >= 1");
  if (!(canvas_width > 100.0)) throw ValidationError(fmt::format("canvas width {} too small", canvas_width));
  Scope::parse(scope, ego);
}

Cut resolve_cut(const Dendrogram& d, const ComicParams& params) {
  if (params.k) return cut_k(d, *params.k);
  if (params.level) return cut(d, *params.level);
  throw ValidationError("either a cut level or a cluster count k is required");
}

namespace {

std::vector<std::string> default_mains(const ComicParams& params) {
  if (!params.mains.empty()) return params.mains;
  const Scope scope = Scope::parse(params.scope, params.ego);
  if (scope.ego) return {*scope.ego};
  return {};
}

Panel build_panel(const DynamicGraph& dg, const ClusterRef& ref, const ComicParams& params, const GenerateOptions& opts,
                  std::vector<std::string> mains) {
  Panel p;
  p.span = ref.span;
  p.span_start = dg.snapshots.at(static_cast<std::size_t>(ref.span.start)).label;
  p.span_end = dg.snapshots.at(static_cast<std::size_t>(ref.span.end)).label;
  p.transition = ref.children.has_value();

  std::optional<Graph> before;
  Graph after;
  if (ref.children) {
    before = group_for_span(dg, ref.children->first, params.agg).graph;
    after = group_for_span(dg, ref.children->second, params.agg).graph;
  } else {
    after = group_for_span(dg, ref.span, params.agg).graph;
  }

  if (mains.empty()) {
    const CharacterOptions co{params.agg, {}, opts.exec};
    for (const auto& c : rank_characters(before ? &*before : nullptr, after, params.ego, params.auto_mains, co)) {
      mains.push_back(c.id);
    }
  }
  const std::set<std::string> main_set(mains.begin(), mains.end());

  const Graph ego_after = ego_network(after, main_set, params.ego);
  Graph graph = ego_after;
  GraphDiff changes;
  if (before) {
    const Graph ego_before = ego_network(*before, main_set, params.ego);
    graph = union_graph(ego_before, ego_after, params.agg);
    changes = diff(ego_before, ego_after);
  }
  for (const auto& m : mains) {
    if (graph.has_node(m) && std::find(p.mains.begin(), p.mains.end(), m) == p.mains.end()) p.mains.push_back(m);
  }

  const std::set<std::string> present(p.mains.begin(), p.mains.end());
  const Supporters sup = supporting_characters(graph, present, params.top, params.highlight);
  const Graph visible = induced_subgraph(graph, sup.visible);

  auto state_of_node = [&](const std::string& id) {
    if (changes.added_nodes.count(id)) return ElementState::added;
    if (changes.deleted_nodes.count(id)) return ElementState::deleted;
    return ElementState::preserved;
  };
  auto state_of_link = [&](const LinkKey& key) {
    if (changes.added_links.count(key)) return ElementState::added;
    if (changes.deleted_links.count(key)) return ElementState::deleted;
    return ElementState::preserved;
  };

  std::map<std::string, double> weight;
  for (const auto& [key, link] : visible.links()) {
    weight[key.source] += link.weight();
    weight[key.target] += link.weight();
    p.links.push_back({key, link.weight(), state_of_link(key)});
  }
  for (const auto& [id, node] : visible.nodes()) {
    PanelNode n;
    n.id = id;
    n.label = node.label();
    n.weight = weight[id];
    n.role = present.count(id) ? NodeRole::main : sup.highlighted.count(id) ? NodeRole::supporter : NodeRole::plain;
    n.state = state_of_node(id);
    p.nodes.push_back(std::move(n));
  }

  PanelContext ctx;
  ctx.mains = p.mains;
  ctx.before = before;
  ctx.after = after;
  ctx.level = params.ego;
  ctx.span_start = p.span_start;
  ctx.span_end = p.span_end;
  p.caption = generate_caption(ctx, opts.captions);
  return p;
}

Graph panel_graph(const Panel& p, bool directed) {
  Graph g(directed);
  for (const auto& n : p.nodes) g.put_node(Node{n.id, {}, {}, {}});
  for (const auto& l : p.links) g.put_link(Link{l.key, {{"weight", l.weight}}});
  return g;
}

std::vector<int> checked_times(const Panel& parent, std::vector<int> times) {
  if (times.empty()) throw ValidationError("timeline operation needs at least one time point");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (int t : times) {
    if (!parent.span.contains(t)) {
      throw ValidationError(fmt::format("time index {} lies outside the panel span [{},{}]", t, parent.span.start,
                                        parent.span.end));
    }
  }
  return times;
}

std::vector<std::string> focus_of(const ComicTemplate& comic, const Panel& parent) {
  if (!comic.params.mains.empty()) return comic.params.mains;
  if (!parent.mains.empty()) return parent.mains;
  return default_mains(comic.params);
}

}  // namespace

ComicTemplate generate_comic(const DynamicGraph& dg, const std::string& dataset_id, const Dendrogram& d,
                             const ComicParams& params, const GenerateOptions& opts) {
  params.validate();
  const Cut c = resolve_cut(d, params);
  ComicTemplate comic;
  comic.dataset = dataset_id;
  comic.params = params;
  comic.style = StyleSpec::defaults();
  comic.frame_width = opts.force.frame_width;
  comic.frame_height = opts.force.frame_height;
  comic.panels.resize(c.clusters.size());
  const auto mains = default_mains(params);
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    comic.panels[i] = build_panel(dg, cluster_ref(d, c.clusters[i]), params, opts, mains);
  }
  layout_comic(comic, dg, opts);
  return comic;
}

void layout_comic(ComicTemplate& comic, const DynamicGraph& dg, const GenerateOptions& opts) {
  if (comic.panels.empty()) throw ValidationError("a comic needs at least one panel");
  std::vector<int> spans;
  for (const auto& p : comic.panels) spans.push_back(p.span.length());
  PanelLayoutOptions po;
  po.canvas_width = comic.params.canvas_width;
  const ComicLayout cl = layout_panels(spans, po);
  comic.width = cl.canvas_width;
  comic.height = cl.canvas_height;
  comic.gutter = cl.gutter;
  comic.tiers = cl.tiers;
  comic.frame_width = opts.force.frame_width;
  comic.frame_height = opts.force.frame_height;
  for (std::size_t i = 0; i < comic.panels.size(); ++i) comic.panels[i].frame = cl.panels[i];

  std::vector<Panel*> all;
  for (auto& p : comic.panels) {
    all.push_back(&p);
    for (auto& inset : p.insets) all.push_back(&inset);
  }
  std::vector<Graph> graphs;
  graphs.reserve(all.size());
  for (const Panel* p : all) graphs.push_back(panel_graph(*p, dg.directed));

  GraphLayout basis;
  if (comic.params.layout == LayoutMode::fixed) {
    basis = force_layout(group_for_span(dg, {0, dg.last_time()}, comic.params.agg).graph, opts.force, opts.exec);
  }
  const auto layouts = layout_graphs(graphs, comic.params.layout, &basis, opts.force, opts.exec);

  std::map<std::string, int> colors;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Panel& p = *all[i];
    for (std::size_t n = 0; n < p.nodes.size(); ++n) {
      p.nodes[n].x = layouts[i][n].x;
      p.nodes[n].y = layouts[i][n].y;
    }
    for (const auto& m : p.mains) colors.emplace(m, static_cast<int>(colors.size()));
  }
  const int palette = std::max<int>(1, static_cast<int>(comic.style.palette.size()));
  for (Panel* p : all) {
    for (auto& n : p->nodes) n.color = n.role == NodeRole::main ? colors.at(n.id) % palette : -1;
  }
}

nlohmann::ordered_json cut_summary(const DynamicGraph& dg, const Dendrogram& d, const Cut& c, EgoLevel level,
                                   int auto_mains, const CharacterOptions& opts) {
  nlohmann::ordered_json j = to_json(c);
  nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
  for (const auto& span : c.clusters) {
    nlohmann::ordered_json cj;
    cj["span"] = {span.start, span.end};
    cj["label"] = dg.span_label(span);
    cj["mains"] = nlohmann::ordered_json::array();
    for (const auto& m : main_characters(cluster_ref(d, span), dg, level, auto_mains, opts)) {
      cj["mains"].push_back({{"id", m.id}, {"change_score", m.change_score}, {"total_link_weight", m.total_link_weight}});
    }
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  return j;
}

void timeline_replace(ComicTemplate& comic, const DynamicGraph& dg, std::size_t index, std::vector<int> times,
                      const GenerateOptions& opts) {
  if (index >= comic.panels.size()) throw ValidationError(fmt::format("no panel {}", index));
  const Panel parent = comic.panels[index];
  times = checked_times(parent, std::move(times));
  const auto focus = focus_of(comic, parent);
  std::vector<Panel> fresh;
  for (int t : times) fresh.push_back(build_panel(dg, ClusterRef{{t, t}, std::nullopt}, comic.params, opts, focus));
  comic.panels.erase(comic.panels.begin() + static_cast<std::ptrdiff_t>(index));
  comic.panels.insert(comic.panels.begin() + static_cast<std::ptrdiff_t>(index), fresh.begin(), fresh.end());
  layout_comic(comic, dg, opts);
}

void timeline_add(ComicTemplate& comic, const DynamicGraph& dg, std::size_t index, std::vector<int> times,
                  const GenerateOptions& opts) {
  if (index >= comic.panels.size()) throw ValidationError(fmt::format("no panel {}", index));
  Panel& parent = comic.panels[index];
  times = checked_times(parent, std::move(times));
  const auto focus = focus_of(comic, parent);
  parent.insets.clear();
  for (int t : times) {
    parent.insets.push_back(build_panel(dg, ClusterRef{{t, t}, std::nullopt}, comic.params, opts, focus));
  }
  // Insets share the bottom-right corner using the same tier layout as the strip.
  const double region_w = parent.frame.width * 0.45;
  const double region_h = parent.frame.height * 0.42;
  PanelLayoutOptions po;
  po.canvas_width = region_w;
  po.canvas_height = region_h;
  po.gutter = 4.0;
  const ComicLayout cl = layout_panels(std::vector<int>(times.size(), 1), po);
  for (std::size_t i = 0; i < parent.insets.size(); ++i) {
    PanelLayout f = cl.panels[i];
    f.x += parent.frame.width - region_w;
    f.y += parent.frame.height - region_h;
    parent.insets[i].frame = f;
  }
  layout_comic(comic, dg, opts);
}

void add_community_overlays(ComicTemplate& comic, const CommunityTimeline& timeline,
                            const std::vector<std::string>& characters) {
  auto apply = [&](Panel& p) {
    p.overlays.clear();
    const auto t = static_cast<std::size_t>(p.span.end);
    if (t >= timeline.partitions.size()) return;
    std::set<std::string> done;
    for (const auto& ch : characters) {
      if (!p.find_node(ch)) continue;
      for (const auto& c : timeline.partitions[t].communities) {
        if (!std::binary_search(c.members.begin(), c.members.end(), ch)) continue;
        if (!done.insert(c.id).second) break;
        Overlay o{c.id, {}};
        for (const auto& m : c.members) {
          if (p.find_node(m)) o.members.push_back(m);
        }
        p.overlays.push_back(std::move(o));
        break;
      }
    }
  };
  for (auto& p : comic.panels) {
    apply(p);
    for (auto& inset : p.insets) apply(inset);
  }
}

}  // namespace dgc
