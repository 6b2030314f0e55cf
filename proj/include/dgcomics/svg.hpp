#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgcomics/comic.hpp"
#include "dgcomics/errors.hpp"

namespace dgc {

struct TemplateIssue {
  std::string panel;    // "3" or "3/inset/0"; empty for template-level issues
  std::string element;  // "node 'A'", "link A--B", ...; empty for panel-level issues
  std::string message;
};

class TemplateError : public ValidationError {
 public:
  explicit TemplateError(std::vector<TemplateIssue> issues);
  const std::vector<TemplateIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<TemplateIssue> issues_;
};

std::vector<TemplateIssue> validate_template(const ComicTemplate& t);

// Throws TemplateError when validate_template reports anything.
std::string render_svg(const ComicTemplate& t, Exec exec = Exec::parallel);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Counter-clockwise (in numeric coordinates) hull without collinear points.
std::vector<Point> convex_hull(std::vector<Point> pts);
// Outline of the hull dilated by `pad`: straight offset edges joined by circular arcs.
// One point gives a circle, collinear points a capsule. Empty input gives "".
std::string padded_hull_path(const std::vector<Point>& pts, double pad);
// Distance from p to the hull polygon (0 inside).
double hull_distance(const std::vector<Point>& hull, Point p);

// Overlay for the members present in the panel, in the panel's frame coordinates.
// Members missing from the panel are ignored; no members gives "".
std::string render_community_hull(const Panel& panel, const std::vector<std::string>& members, double pad,
                                  const std::string& fill = "#4393c3");

}  // namespace dgc
