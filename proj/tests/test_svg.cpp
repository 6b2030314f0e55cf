#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "dgcomics/io.hpp"
#include "dgcomics/svg.hpp"
#include "support.hpp"

using namespace dgc;

namespace {

ComicTemplate tri_comic() {
  const auto dg = testing::tri();
  ComicParams params;
  params.level = 0.9;
  params.top = 100.0;
  params.highlight = 0.0;
  params.mains = {"A"};
  return generate_comic(dg, "tri", build_dendrogram(dg), params);
}

ComicTemplate random_comic(std::mt19937& rng) {
  const auto dg = testing::random_dynamic(rng, 7, 16);
  ComicParams params;
  params.k = 4;
  params.top = 60.0;
  params.highlight = 20.0;
  params.auto_mains = 2;
  params.layout = LayoutMode::fixed;
  return generate_comic(dg, "r", build_dendrogram(dg), params);
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// Every numeric pair after M/L/A commands in a hull path.
std::vector<Point> path_points(const std::string& d) {
  std::vector<Point> out;
  std::istringstream in(d);
  std::string cmd;
  while (in >> cmd) {
    if (cmd == "M" || cmd == "L") {
      Point p;
      in >> p.x >> p.y;
      out.push_back(p);
    } else if (cmd == "A") {
      double rx, ry, rot, large, sweep;
      Point p;
      in >> rx >> ry >> rot >> large >> sweep >> p.x >> p.y;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("svg") {

TEST_CASE("rendered comics are well-formed SVG 1.1 and deterministic") {
  std::mt19937 rng(80);
  for (int i = 0; i < 15; ++i) {
    const auto comic = random_comic(rng);
    const std::string svg = render_svg(comic);
    CHECK(testing::xml_problem(svg) == "");
    CHECK(testing::svg11_problem(svg) == "");
    CHECK(render_svg(comic, Exec::serial) == svg);
    CHECK(count(svg, "<g id=\"panel-") == comic.panels.size());
  }
}

TEST_CASE("each added or deleted element is drawn once with its state class") {
  std::mt19937 rng(81);
  for (int i = 0; i < 15; ++i) {
    const auto comic = random_comic(rng);
    const std::string svg = render_svg(comic);
    std::size_t added = 0, deleted = 0, added_links = 0, deleted_links = 0;
    for (const auto& p : comic.panels) {
      for (const auto& n : p.nodes) {
        added += n.state == ElementState::added;
        deleted += n.state == ElementState::deleted;
      }
      for (const auto& l : p.links) {
        added_links += l.state == ElementState::added;
        deleted_links += l.state == ElementState::deleted;
      }
    }
    const std::regex added_node(R"(<circle class="node \w+ added")"), deleted_node(R"(<circle class="node \w+ deleted")");
    auto matches = [&](const std::regex& re) {
      return static_cast<std::size_t>(std::distance(std::sregex_iterator(svg.begin(), svg.end(), re), std::sregex_iterator()));
    };
    CHECK(matches(added_node) == added);
    CHECK(matches(deleted_node) == deleted);
    CHECK(count(svg, "<line class=\"link added\"") == added_links);
    CHECK(count(svg, "<line class=\"link deleted\"") == deleted_links);
    CHECK(count(svg, "filter=\"url(#glow)\"") == added + added_links);
  }
}

TEST_CASE("triangle comic matches the golden SVG") {
  const std::string svg = render_svg(tri_comic());
  const std::string path = DGCOMICS_SOURCE_DIR "/tests/golden/tri.svg";
  if (std::getenv("DGCOMICS_UPDATE_GOLDEN")) write_file(path, svg);
  CHECK(svg == read_file(path));
  CHECK(svg.find("<title>B</title>") != std::string::npos);
  CHECK(count(svg, "class=\"node default deleted\"") + count(svg, "class=\"node supporter deleted\"") == 1);
}

TEST_CASE("hidden nodes and overrides") {
  auto comic = tri_comic();
  comic.style.overrides["B"] = StyleOverride{std::nullopt, std::nullopt, true};
  comic.style.overrides["A"] = StyleOverride{"#abcdef", 9.0, false};
  const std::string svg = render_svg(comic);
  CHECK(svg.find("<title>B</title>") == std::string::npos);
  CHECK(svg.find("<title>A--B</title>") == std::string::npos);
  CHECK(svg.find("fill=\"#abcdef\"") != std::string::npos);
}

TEST_CASE("text is escaped") {
  auto comic = tri_comic();
  comic.panels[0].nodes[0].label = "<A & \"co\">";
  comic.panels[0].caption.text = "x < y & z";
  const std::string svg = render_svg(comic);
  CHECK(testing::xml_problem(svg) == "");
  CHECK(svg.find("&lt;A &amp; &quot;co&quot;&gt;") != std::string::npos);
}

TEST_CASE("validation lists every problem with its location") {
  auto comic = tri_comic();
  comic.panels[1].links.push_back({make_link_key("A", "Z", false), 1.0, ElementState::added});
  comic.panels[1].mains.push_back("Q");
  comic.panels[0].nodes[0].x = NAN;
  comic.schema = "dgcomic/0";
  const auto issues = validate_template(comic);
  REQUIRE(issues.size() == 4);
  CHECK(issues[0].message.find("schema") != std::string::npos);
  CHECK(issues[1].panel == "0");
  CHECK(issues[1].element == "node 'A'");
  CHECK(issues[2].panel == "1");
  CHECK(issues[2].element == "link A--Z");
  CHECK(issues[3].element == "main 'Q'");
  try {
    render_svg(comic);
    FAIL("expected TemplateError");
  } catch (const TemplateError& e) {
    CHECK(e.issues().size() == 4);
    CHECK(std::string(e.what()).find("panel 1: link A--Z: unknown endpoint 'Z'") != std::string::npos);
  }
  ComicTemplate empty;
  CHECK_FALSE(validate_template(empty).empty());
}

TEST_CASE("hull of one point is a circle and of collinear points a capsule") {
  CHECK(padded_hull_path({}, 5.0) == "");
  const std::string dot = padded_hull_path({{10, 10}}, 5.0);
  CHECK(dot == "M 5.00 10.00 A 5.00 5.00 0 1 1 15.00 10.00 A 5.00 5.00 0 1 1 5.00 10.00 Z");
  const auto line = convex_hull({{0, 0}, {5, 0}, {10, 0}});
  CHECK(line == std::vector<Point>{{0, 0}, {10, 0}});
  const std::string capsule = padded_hull_path({{0, 0}, {5, 0}, {10, 0}}, 2.0);
  CHECK(count(capsule, " A ") == 2);
  for (const auto& p : path_points(capsule)) CHECK(hull_distance(line, p) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("padded hulls enclose every member at the padding distance") {
  std::mt19937 rng(82);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<Point> pts(static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 12)(rng)));
    for (auto& p : pts) p = {std::round(u(rng)), std::round(u(rng))};
    const auto hull = convex_hull(pts);
    REQUIRE_FALSE(hull.empty());
    for (const auto& p : pts) CHECK(hull_distance(hull, p) <= 1e-9);
    for (std::size_t k = 0; k < hull.size() && hull.size() >= 3; ++k) {
      const auto& a = hull[k];
      const auto& b = hull[(k + 1) % hull.size()];
      const auto& c = hull[(k + 2) % hull.size()];
      CHECK((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) > 0.0);
    }
    for (const auto& q : path_points(padded_hull_path(pts, 6.0))) {
      CHECK(hull_distance(hull, q) == doctest::Approx(6.0).epsilon(0.01));
    }
  }
}

TEST_CASE("community hull uses only members present in the panel") {
  const auto comic = tri_comic();
  CHECK(render_community_hull(comic.panels[1], {"nobody"}, 6.0) == "");
  const std::string hull = render_community_hull(comic.panels[1], {"A", "C", "nobody"}, 6.0);
  CHECK(hull.find("<path") != std::string::npos);
  CHECK(testing::xml_problem(hull) == "");
}

}
