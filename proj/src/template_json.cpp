#include <array>

#include <fmt/format.h>

#include "detail/json_read.hpp"
#include "dgcomics/comic.hpp"
#include "dgcomics/errors.hpp"

namespace dgc {

using nlohmann::json;
using nlohmann::ordered_json;
using detail::ObjectReader;

namespace {

template <class Enum, std::size_t N>
Enum enum_at(const ObjectReader& r, std::string_view key, const std::array<Enum, N>& values) {
  const auto s = r.get<std::string>(key);
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  throw SchemaError(r.child(key), fmt::format("unknown value '{}'", s));
}

EgoLevel ego_from(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (x == 1.0) return EgoLevel::one;
    if (x == 1.5) return EgoLevel::one_and_half;
    throw SchemaError(path, fmt::format("ego level must be 1.0 or 1.5, got {}", x));
  }
  if (!v.is_string()) throw SchemaError(path, "expected 1.0 or 1.5");
  try {
    return parse_ego_level(v.get<std::string>());
  } catch (const ValidationError& e) {
    throw SchemaError(path, e.what());
  }
}

ordered_json role_json(const RoleStyle& s) {
  return {{"fill", s.fill},   {"stroke", s.stroke}, {"stroke_width", s.stroke_width}, {"label", s.label},
          {"dash", s.dash},   {"glow", s.glow},     {"opacity", s.opacity}};
}

RoleStyle role_from(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"fill", "stroke", "stroke_width", "label", "dash", "glow", "opacity"});
  RoleStyle s;
  s.fill = r.get<std::string>("fill");
  s.stroke = r.get<std::string>("stroke");
  s.stroke_width = r.get<double>("stroke_width");
  s.label = r.get<bool>("label");
  s.dash = r.get<std::string>("dash");
  s.glow = r.get<bool>("glow");
  s.opacity = r.get<double>("opacity");
  return s;
}

ordered_json style_json(const StyleSpec& s) {
  ordered_json j;
  j["main"] = role_json(s.main);
  j["supporter"] = role_json(s.supporter);
  j["default"] = role_json(s.plain);
  j["added"] = role_json(s.added);
  j["deleted"] = role_json(s.deleted);
  j["palette"] = s.palette;
  ordered_json overrides = ordered_json::object();
  for (const auto& [id, o] : s.overrides) {
    ordered_json oj;
    oj["color"] = o.color ? ordered_json(*o.color) : nlohmann::ordered_json();
    oj["radius"] = o.radius ? ordered_json(*o.radius) : nlohmann::ordered_json();
    oj["hidden"] = o.hidden;
    overrides[id] = std::move(oj);
  }
  j["overrides"] = std::move(overrides);
  return j;
}

StyleOverride override_from(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"color", "radius", "hidden"});
  StyleOverride o;
  if (r.has("color")) o.color = r.get<std::string>("color");
  if (r.has("radius")) o.radius = r.get<double>("radius");
  o.hidden = r.get_or<bool>("hidden", false);
  return o;
}

StyleSpec style_from(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"main", "supporter", "default", "added", "deleted", "palette", "overrides"});
  StyleSpec s;
  s.main = role_from(r.at("main"), r.child("main"));
  s.supporter = role_from(r.at("supporter"), r.child("supporter"));
  s.plain = role_from(r.at("default"), r.child("default"));
  s.added = role_from(r.at("added"), r.child("added"));
  s.deleted = role_from(r.at("deleted"), r.child("deleted"));
  s.palette = r.get<std::vector<std::string>>("palette");
  const auto& ov = r.at("overrides");
  if (!ov.is_object()) throw SchemaError(r.child("overrides"), "expected an object");
  for (const auto& [id, o] : ov.items()) s.overrides[id] = override_from(o, r.child("overrides") + "/" + id);
  return s;
}

ordered_json frame_json(const PanelLayout& f) {
  return {{"tier", f.tier}, {"x", f.x}, {"y", f.y}, {"width", f.width}, {"height", f.height}};
}

PanelLayout frame_from(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"tier", "x", "y", "width", "height"});
  return {r.get<int>("tier"), r.get<double>("x"), r.get<double>("y"), r.get<double>("width"), r.get<double>("height")};
}

constexpr std::array kRoles{NodeRole::main, NodeRole::supporter, NodeRole::plain};
constexpr std::array kStates{ElementState::added, ElementState::deleted, ElementState::preserved};

ordered_json panel_json(const Panel& p) {
  ordered_json j;
  j["span"] = {p.span.start, p.span.end};
  j["span_start"] = p.span_start;
  j["span_end"] = p.span_end;
  j["label"] = p.span_label();
  j["transition"] = p.transition;
  j["frame"] = frame_json(p.frame);
  j["mains"] = p.mains;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : p.nodes) {
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"x", n.x},
                     {"y", n.y},
                     {"weight", n.weight},
                     {"role", to_string(n.role)},
                     {"state", to_string(n.state)},
                     {"color", n.color}});
  }
  j["nodes"] = std::move(nodes);
  ordered_json links = ordered_json::array();
  for (const auto& l : p.links) {
    links.push_back({{"source", l.key.source},
                     {"target", l.key.target},
                     {"weight", l.weight},
                     {"state", to_string(l.state)}});
  }
  j["links"] = std::move(links);
  ordered_json clauses = ordered_json::array();
  for (const auto& c : p.caption.clauses) clauses.push_back(to_json(c));
  j["caption"] = {{"text", p.caption.text}, {"clauses", std::move(clauses)}};
  ordered_json overlays = ordered_json::array();
  for (const auto& o : p.overlays) overlays.push_back({{"community", o.community}, {"members", o.members}});
  j["overlays"] = std::move(overlays);
  ordered_json insets = ordered_json::array();
  for (const auto& inset : p.insets) insets.push_back(panel_json(inset));
  j["insets"] = std::move(insets);
  return j;
}

Panel panel_from(const json& j, const std::string& path) {
  ObjectReader r(j, path,
                 {"span", "span_start", "span_end", "label", "transition", "frame", "mains", "nodes", "links", "caption",
                  "overlays", "insets"});
  Panel p;
  const auto span = r.get<std::vector<int>>("span");
  if (span.size() != 2) throw SchemaError(r.child("span"), "expected [start, end]");
  p.span = {span[0], span[1]};
  p.span_start = r.get<std::string>("span_start");
  p.span_end = r.get<std::string>("span_end");
  p.transition = r.get<bool>("transition");
  p.frame = frame_from(r.at("frame"), r.child("frame"));
  p.mains = r.get<std::vector<std::string>>("mains");
  const auto& nodes = r.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ObjectReader n(nodes[i], fmt::format("{}/{}", r.child("nodes"), i),
                   {"id", "label", "x", "y", "weight", "role", "state", "color"});
    PanelNode pn;
    pn.id = n.get<std::string>("id");
    pn.label = n.get<std::string>("label");
    pn.x = n.get<double>("x");
    pn.y = n.get<double>("y");
    pn.weight = n.get<double>("weight");
    pn.role = enum_at(n, "role", kRoles);
    pn.state = enum_at(n, "state", kStates);
    pn.color = n.get<int>("color");
    p.nodes.push_back(std::move(pn));
  }
  const auto& links = r.array("links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    ObjectReader l(links[i], fmt::format("{}/{}", r.child("links"), i), {"source", "target", "weight", "state"});
    PanelLink pl;
    pl.key = {l.get<std::string>("source"), l.get<std::string>("target")};
    pl.weight = l.get<double>("weight");
    pl.state = enum_at(l, "state", kStates);
    p.links.push_back(std::move(pl));
  }
  ObjectReader cap(r.at("caption"), r.child("caption"), {"text", "clauses"});
  p.caption.text = cap.get<std::string>("text");
  const auto& clauses = cap.array("clauses");
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    try {
      p.caption.clauses.push_back(caption_clauses_from_json(clauses[i]));
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(fmt::format("{}/{}", cap.child("clauses"), i), e.what());
    }
  }
  const auto& overlays = r.array("overlays");
  for (std::size_t i = 0; i < overlays.size(); ++i) {
    ObjectReader o(overlays[i], fmt::format("{}/{}", r.child("overlays"), i), {"community", "members"});
    p.overlays.push_back({o.get<std::string>("community"), o.get<std::vector<std::string>>("members")});
  }
  const auto& insets = r.array("insets");
  for (std::size_t i = 0; i < insets.size(); ++i) {
    p.insets.push_back(panel_from(insets[i], fmt::format("{}/{}", r.child("insets"), i)));
  }
  return p;
}

}  // namespace

ordered_json to_json(const ComicParams& p) {
  ordered_json j;
  j["level"] = p.level ? ordered_json(*p.level) : nlohmann::ordered_json();
  j["k"] = p.k ? ordered_json(*p.k) : nlohmann::ordered_json();
  j["scope"] = p.scope;
  j["ego"] = to_string(p.ego);
  j["top"] = p.top;
  j["highlight"] = p.highlight;
  j["layout"] = to_string(p.layout);
  j["mains"] = p.mains;
  j["auto_mains"] = p.auto_mains;
  j["agg"] = to_string(p.agg);
  j["canvas_width"] = p.canvas_width;
  return j;
}

ComicParams params_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path,
                 {"level", "k", "scope", "ego", "top", "highlight", "layout", "mains", "auto_mains", "agg",
                  "canvas_width"});
  ComicParams p;
  if (r.has("level")) p.level = r.get<double>("level");
  if (r.has("k")) p.k = r.get<int>("k");
  p.scope = r.get_or<std::string>("scope", p.scope);
  if (r.has("ego")) p.ego = ego_from(r.at("ego"), r.child("ego"));
  p.top = r.get_or<double>("top", p.top);
  p.highlight = r.get_or<double>("highlight", p.highlight);
  try {
    if (r.has("layout")) p.layout = parse_layout_mode(r.get<std::string>("layout"));
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(r.child("layout"), e.what());
  }
  p.mains = r.get_or<std::vector<std::string>>("mains", {});
  p.auto_mains = r.get_or<int>("auto_mains", p.auto_mains);
  try {
    if (r.has("agg")) p.agg = parse_aggregation(r.get<std::string>("agg"));
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(r.child("agg"), e.what());
  }
  p.canvas_width = r.get_or<double>("canvas_width", p.canvas_width);
  return p;
}

ordered_json to_json(const ComicTemplate& t) {
  ordered_json j;
  j["schema"] = t.schema;
  j["dataset"] = t.dataset;
  j["params"] = to_json(t.params);
  j["canvas"] = {{"width", t.width}, {"height", t.height}, {"gutter", t.gutter}, {"tiers", t.tiers}};
  j["frame"] = {{"width", t.frame_width}, {"height", t.frame_height}};
  j["style"] = style_json(t.style);
  ordered_json panels = ordered_json::array();
  for (const auto& p : t.panels) panels.push_back(panel_json(p));
  j["panels"] = std::move(panels);
  return j;
}

ComicTemplate template_from_json(const json& j) {
  ObjectReader r(j, "", {"schema", "dataset", "params", "canvas", "frame", "style", "panels"});
  ComicTemplate t;
  t.schema = r.get<std::string>("schema");
  if (t.schema != kTemplateSchema) {
    throw SchemaError("/schema", fmt::format("unsupported schema '{}', expected '{}'", t.schema, kTemplateSchema));
  }
  t.dataset = r.get<std::string>("dataset");
  t.params = params_from_json(r.at("params"), "/params");
  ObjectReader canvas(r.at("canvas"), "/canvas", {"width", "height", "gutter", "tiers"});
  t.width = canvas.get<double>("width");
  t.height = canvas.get<double>("height");
  t.gutter = canvas.get<double>("gutter");
  t.tiers = canvas.get<int>("tiers");
  ObjectReader frame(r.at("frame"), "/frame", {"width", "height"});
  t.frame_width = frame.get<double>("width");
  t.frame_height = frame.get<double>("height");
  t.style = style_from(r.at("style"), "/style");
  const auto& panels = r.array("panels");
  for (std::size_t i = 0; i < panels.size(); ++i) t.panels.push_back(panel_from(panels[i], fmt::format("/panels/{}", i)));
  return t;
}

std::string dump_template(const ComicTemplate& t) { return to_json(t).dump(2) + "\n"; }

}  // namespace dgc
