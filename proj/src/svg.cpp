#include "dgcomics/svg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "dgcomics/kernels.hpp"

namespace dgc {

namespace {

constexpr double kLabelBand = 22.0;
constexpr double kLineHeight = 14.0;
constexpr double kCharWidth = 6.2;
constexpr double kInnerPad = 6.0;
constexpr double kHullPad = 12.0;

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  return fmt::format("{:.2f}", v);
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> wrap(const std::string& text, double width) {
  const auto max_chars = static_cast<std::size_t>(std::max(8.0, width / kCharWidth));
  std::vector<std::string> lines;
  std::string line;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(' ', pos);
    if (next == std::string::npos) next = text.size();
    const std::string word = text.substr(pos, next - pos);
    if (!line.empty() && line.size() + 1 + word.size() > max_chars) {
      lines.push_back(line);
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += word;
    pos = next + 1;
  }
  if (!line.empty()) lines.push_back(line);
  return lines;
}

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

void check_panel(const ComicTemplate& t, const Panel& p, const std::string& where, std::vector<TemplateIssue>& out) {
  auto issue = [&](std::string element, std::string message) {
    out.push_back({where, std::move(element), std::move(message)});
  };
  if (p.span.start > p.span.end) issue("", fmt::format("span [{},{}] is reversed", p.span.start, p.span.end));
  if (!(p.frame.width > 0.0 && p.frame.height > 0.0)) issue("", "frame has no area");
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const auto& n = p.nodes[i];
    const std::string el = fmt::format("node '{}'", n.id);
    if (n.id.empty()) issue(el, "empty id");
    if (i > 0 && !(p.nodes[i - 1].id < n.id)) issue(el, "nodes not sorted by unique id");
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) issue(el, "non-finite position");
    if (!(n.weight >= 0.0)) issue(el, "negative weight");
    if (n.color >= static_cast<int>(t.style.palette.size())) issue(el, fmt::format("color {} outside palette", n.color));
  }
  for (const auto& l : p.links) {
    const std::string el = fmt::format("link {}", l.key.str(false));
    if (!p.find_node(l.key.source)) issue(el, fmt::format("unknown endpoint '{}'", l.key.source));
    if (!p.find_node(l.key.target)) issue(el, fmt::format("unknown endpoint '{}'", l.key.target));
    if (!(l.weight > 0.0)) issue(el, "weight must be > 0");
  }
  for (const auto& m : p.mains) {
    if (!p.find_node(m)) issue(fmt::format("main '{}'", m), "not a node of the panel");
  }
  for (const auto& o : p.overlays) {
    for (const auto& m : o.members) {
      if (!p.find_node(m)) issue(fmt::format("overlay '{}'", o.community), fmt::format("unknown member '{}'", m));
    }
  }
  for (std::size_t i = 0; i < p.insets.size(); ++i) {
    const auto& inset = p.insets[i];
    const std::string sub = fmt::format("{}/inset/{}", where, i);
    if (inset.span.start < p.span.start || inset.span.end > p.span.end) {
      out.push_back({sub, "", "inset span outside the parent span"});
    }
    check_panel(t, inset, sub, out);
  }
}

struct NodeLook {
  const PanelNode* node;
  double r;  // canvas units
  std::string fill;
  const RoleStyle* role;
};

class PanelWriter {
 public:
  PanelWriter(const ComicTemplate& t, std::string& out) : t_(t), out_(out) {}

  void panel(const Panel& p, const std::string& id, bool inset) {
    const auto& f = p.frame;
    out_ += fmt::format("<g id=\"{}\" class=\"{}\" transform=\"translate({},{})\">\n", id, inset ? "inset" : "panel",
                        num(f.x), num(f.y));
    out_ += fmt::format("<rect class=\"border\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" "
                        "stroke=\"#000000\" stroke-width=\"{}\"/>\n",
                        num(f.width), num(f.height), inset ? "1" : "2");
    out_ += fmt::format("<text class=\"span-label\" x=\"{}\" y=\"15\" font-family=\"sans-serif\" font-size=\"12\" "
                        "font-weight=\"bold\">{}</text>\n",
                        num(kInnerPad), escape(p.span_label()));

    const auto lines = inset ? std::vector<std::string>{} : wrap(p.caption.text, f.width - 2 * kInnerPad);
    const double caption_h = lines.empty() ? 0.0 : static_cast<double>(lines.size()) * kLineHeight + kInnerPad;
    const double gw = std::max(1.0, f.width - 2 * kInnerPad);
    const double gh = std::max(1.0, f.height - kLabelBand - caption_h - kInnerPad);
    const double s = std::min(gw / t_.frame_width, gh / t_.frame_height);
    const double ox = kInnerPad + (gw - s * t_.frame_width) / 2.0;
    const double oy = kLabelBand + (gh - s * t_.frame_height) / 2.0;
    graph(p, s, ox, oy);

    if (!lines.empty()) {
      out_ += fmt::format("<text class=\"caption\" font-family=\"sans-serif\" font-size=\"11\">");
      double y = f.height - caption_h + kLineHeight - 2.0;
      for (const auto& line : lines) {
        out_ += fmt::format("<tspan x=\"{}\" y=\"{}\">{}</tspan>", num(kInnerPad), num(y), escape(line));
        y += kLineHeight;
      }
      out_ += "</text>\n";
    }
    for (std::size_t i = 0; i < p.insets.size(); ++i) panel(p.insets[i], fmt::format("{}-inset-{}", id, i), true);
    out_ += "</g>\n";
  }

 private:
  const StyleOverride* override_of(const std::string& id) const {
    auto it = t_.style.overrides.find(id);
    return it == t_.style.overrides.end() ? nullptr : &it->second;
  }

  const RoleStyle& role_style(NodeRole r) const {
    switch (r) {
      case NodeRole::main: return t_.style.main;
      case NodeRole::supporter: return t_.style.supporter;
      case NodeRole::plain: return t_.style.plain;
    }
    return t_.style.plain;
  }

  std::string state_attrs(ElementState st, double s) const {
    if (st == ElementState::added) {
      return t_.style.added.glow ? " filter=\"url(#glow)\"" : "";
    }
    if (st == ElementState::deleted) {
      std::string a;
      if (!t_.style.deleted.dash.empty()) {
        std::string dash;
        // Dash lengths are given in canvas units; the graph group is scaled by s.
        std::size_t pos = 0;
        const auto& d = t_.style.deleted.dash;
        while (pos < d.size()) {
          std::size_t next = d.find_first_of(" ,", pos);
          if (next == std::string::npos) next = d.size();
          if (next > pos) {
            if (!dash.empty()) dash += ' ';
            dash += num(std::stod(d.substr(pos, next - pos)) / s);
          }
          pos = next + 1;
        }
        a += fmt::format(" stroke-dasharray=\"{}\"", dash);
      }
      a += fmt::format(" opacity=\"{}\"", num(t_.style.deleted.opacity));
      return a;
    }
    return "";
  }

  void graph(const Panel& p, double s, double ox, double oy) {
    out_ += fmt::format("<g class=\"graph\" transform=\"translate({},{}) scale({})\">\n", num(ox), num(oy),
                        fmt::format("{:.6f}", s));
    std::map<std::string, NodeLook, std::less<>> looks;
    double max_w = 0.0;
    for (const auto& n : p.nodes) max_w = std::max(max_w, n.weight);
    for (const auto& n : p.nodes) {
      const StyleOverride* o = override_of(n.id);
      if (o && o->hidden) continue;
      const RoleStyle& role = role_style(n.role);
      double r = 4.0 + 3.0 * std::sqrt(max_w > 0.0 ? n.weight / max_w : 0.0);
      r = std::clamp(r, 4.0, 16.0);
      if (o && o->radius) r = std::clamp(*o->radius, 1.0, 32.0);
      std::string fill = role.fill;
      if (n.role == NodeRole::main && n.color >= 0 && !t_.style.palette.empty()) {
        fill = t_.style.palette[static_cast<std::size_t>(n.color)];
      }
      if (o && o->color) fill = *o->color;
      looks.emplace(n.id, NodeLook{&n, r, fill, &role});
    }

    for (const auto& o : p.overlays) out_ += render_community_hull(p, o.members, kHullPad / s);

    double max_lw = 0.0;
    for (const auto& l : p.links) max_lw = std::max(max_lw, l.weight);
    for (const auto& l : p.links) {
      auto a = looks.find(l.key.source);
      auto b = looks.find(l.key.target);
      if (a == looks.end() || b == looks.end()) continue;
      const double width = (0.5 + 2.5 * (max_lw > 0.0 ? l.weight / max_lw : 0.0)) / s;
      out_ += fmt::format(
          "<line class=\"link {}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}>"
          "<title>{}</title></line>\n",
          to_string(l.state), num(a->second.node->x), num(a->second.node->y), num(b->second.node->x),
          num(b->second.node->y), escape(t_.style.plain.stroke), num(width), state_attrs(l.state, s),
          escape(l.key.str(false)));
    }

    for (const auto& [id, look] : looks) {
      const PanelNode& n = *look.node;
      out_ += fmt::format(
          "<circle class=\"node {} {}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}>"
          "<title>{}</title></circle>\n",
          to_string(n.role), to_string(n.state), num(n.x), num(n.y), num(look.r / s), escape(look.fill),
          escape(look.role->stroke), num(look.role->stroke_width / s), state_attrs(n.state, s), escape(n.id));
    }
    for (const auto& [id, look] : looks) {
      if (!look.role->label) continue;
      const PanelNode& n = *look.node;
      out_ += fmt::format(
          "<text class=\"node-label\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\">{}</text>\n",
          num(n.x + (look.r + 2.0) / s), num(n.y + 3.5 / s), num(10.0 / s), escape(n.label));
    }
    out_ += "</g>\n";
  }

  const ComicTemplate& t_;
  std::string& out_;
};

}  // namespace

TemplateError::TemplateError(std::vector<TemplateIssue> issues)
    : ValidationError([&] {
        std::string msg = "invalid comic template:";
        for (const auto& i : issues) {
          msg += "\n  ";
          if (!i.panel.empty()) msg += fmt::format("panel {}: ", i.panel);
          if (!i.element.empty()) msg += i.element + ": ";
          msg += i.message;
        }
        return msg;
      }()),
      issues_(std::move(issues)) {}

std::vector<TemplateIssue> validate_template(const ComicTemplate& t) {
  std::vector<TemplateIssue> out;
  if (t.schema != kTemplateSchema) out.push_back({"", "", fmt::format("unsupported schema '{}'", t.schema)});
  if (t.panels.empty()) out.push_back({"", "", "no panels"});
  if (!(t.width > 0.0 && t.height > 0.0)) out.push_back({"", "", "canvas has no area"});
  if (!(t.frame_width > 0.0 && t.frame_height > 0.0)) out.push_back({"", "", "layout frame has no area"});
  for (std::size_t i = 0; i < t.panels.size(); ++i) {
    const std::string where = std::to_string(i);
    if (i > 0 && t.panels[i].span.start <= t.panels[i - 1].span.end) {
      out.push_back({where, "", "panels are not in time order"});
    }
    check_panel(t, t.panels[i], where, out);
  }
  return out;
}

std::string render_svg(const ComicTemplate& t, Exec exec) {
  auto issues = validate_template(t);
  if (!issues.empty()) throw TemplateError(std::move(issues));

  std::vector<std::string> parts(t.panels.size());
  for_each_index(t.panels.size(), exec, [&](std::size_t i) {
    PanelWriter w(t, parts[i]);
    w.panel(t.panels[i], fmt::format("panel-{}", i), false);
  });

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      num(t.width), num(t.height));
  out += "<defs>\n<filter id=\"glow\" x=\"-50%\" y=\"-50%\" width=\"200%\" height=\"200%\">"
         "<feGaussianBlur in=\"SourceGraphic\" stdDeviation=\"2.5\" result=\"blur\"/>"
         "<feMerge><feMergeNode in=\"blur\"/><feMergeNode in=\"blur\"/><feMergeNode in=\"SourceGraphic\"/></feMerge>"
         "</filter>\n</defs>\n";
  out += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#f7f7f7\"/>\n",
                     num(t.width), num(t.height));
  for (const auto& part : parts) out += part;
  out += "</svg>\n";
  return out;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

std::string padded_hull_path(const std::vector<Point>& pts, double pad) {
  const auto h = convex_hull(pts);
  if (h.empty()) return "";
  const std::string r = num(pad);
  if (h.size() == 1) {
    const Point c = h[0];
    return fmt::format("M {} {} A {} {} 0 1 1 {} {} A {} {} 0 1 1 {} {} Z", num(c.x - pad), num(c.y), r, r,
                       num(c.x + pad), num(c.y), r, r, num(c.x - pad), num(c.y));
  }
  const std::size_t n = h.size();
  std::vector<Point> normal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = h[i];
    const Point b = h[(i + 1) % n];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    normal[i] = {(b.y - a.y) / len, -(b.x - a.x) / len};
  }
  std::string d = fmt::format("M {} {}", num(h[0].x + normal[0].x * pad), num(h[0].y + normal[0].y * pad));
  for (std::size_t i = 0; i < n; ++i) {
    const Point b = h[(i + 1) % n];
    const Point nb = normal[(i + 1) % n];
    d += fmt::format(" L {} {}", num(b.x + normal[i].x * pad), num(b.y + normal[i].y * pad));
    d += fmt::format(" A {} {} 0 0 1 {} {}", r, r, num(b.x + nb.x * pad), num(b.y + nb.y * pad));
  }
  return d + " Z";
}

double hull_distance(const std::vector<Point>& hull, Point p) {
  if (hull.empty()) return INFINITY;
  if (hull.size() == 1) return std::hypot(p.x - hull[0].x, p.y - hull[0].y);
  bool inside = hull.size() >= 3;
  double best = INFINITY;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point a = hull[i];
    const Point b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < 0) inside = false;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy)));
  }
  return inside ? 0.0 : best;
}

std::string render_community_hull(const Panel& panel, const std::vector<std::string>& members, double pad,
                                  const std::string& fill) {
  std::vector<Point> pts;
  std::set<std::string> seen;
  for (const auto& m : members) {
    const PanelNode* n = panel.find_node(m);
    if (n && seen.insert(m).second) pts.push_back({n->x, n->y});
  }
  if (pts.empty()) return "";
  return fmt::format("<path class=\"hull\" d=\"{}\" fill=\"{}\" fill-opacity=\"0.18\" stroke=\"{}\" "
                     "stroke-opacity=\"0.5\" stroke-width=\"{}\"/>\n",
                     padded_hull_path(pts, pad), escape(fill), escape(fill), num(pad / 12.0));
}

}  // namespace dgc
