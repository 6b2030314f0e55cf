#include <doctest.h>

#include <random>

#include "dgcomics/comic.hpp"
#include "dgcomics/errors.hpp"
#include "dgcomics/io.hpp"
#include "support.hpp"

using namespace dgc;

namespace {

const PanelLink* find_link(const Panel& p, const std::string& a, const std::string& b) {
  const LinkKey key = make_link_key(a, b, false);
  for (const auto& l : p.links) {
    if (l.key == key) return &l;
  }
  return nullptr;
}

DynamicGraph coauthorship() {
  const std::string dir = DGCOMICS_SOURCE_DIR "/data/";
  return load_csv(dir + "coauthorship20.csv", dir + "coauthorship20.nodes.csv", {"coauthorship20", false});
}

ComicParams e2e_params() {
  ComicParams p;
  p.k = 9;
  p.ego = EgoLevel::one_and_half;
  p.top = 15.0;
  p.highlight = 5.0;
  p.layout = LayoutMode::fixed;
  return p;
}

}  // namespace

TEST_SUITE("comic") {

TEST_CASE("triangle at level 0.9 gives a snapshot panel and a transition panel") {
  const auto dg = testing::tri();
  const auto d = build_dendrogram(dg);
  ComicParams params;
  params.level = 0.9;
  params.top = 100.0;
  params.highlight = 0.0;
  params.mains = {"A"};
  const auto comic = generate_comic(dg, "tri", d, params);
  REQUIRE(comic.panels.size() == 2);
  const Panel& first = comic.panels[0];
  CHECK(first.span == Span{0, 0});
  CHECK_FALSE(first.transition);
  CHECK(first.caption.text == "In 0, A's strongest relationship: B.");

  const Panel& second = comic.panels[1];
  CHECK(second.span == Span{1, 2});
  CHECK(second.transition);
  CHECK(second.span_label() == "1–2");
  REQUIRE(second.find_node("B"));
  CHECK(second.find_node("B")->state == ElementState::deleted);
  CHECK(second.find_node("A")->state == ElementState::preserved);
  CHECK(second.find_node("A")->role == NodeRole::main);
  REQUIRE(find_link(second, "A", "C"));
  CHECK(find_link(second, "A", "C")->state == ElementState::preserved);
  REQUIRE(find_link(second, "A", "B"));
  CHECK(find_link(second, "A", "B")->state == ElementState::deleted);
  CHECK(comic.tiers == 1);
  CHECK(comic.panels[1].frame.width > comic.panels[0].frame.width);
}

TEST_CASE("automatic main of the merged triangle cluster is B") {
  const auto dg = testing::tri();
  const auto d = build_dendrogram(dg);
  ComicParams params;
  params.level = 0.9;
  params.top = 100.0;
  params.highlight = 0.0;
  const auto comic = generate_comic(dg, "tri", d, params);
  CHECK(comic.panels[1].mains == std::vector<std::string>{"B"});
  const auto summary = cut_summary(dg, d, resolve_cut(d, params), params.ego, 1);
  CHECK(summary["clusters"][1]["mains"][0]["id"] == "B");
  CHECK(summary["clusters"][1]["mains"][0]["change_score"] == 1.0);
}

TEST_CASE("every main character is visible in its panel") {
  std::mt19937 rng(70);
  for (int i = 0; i < 20; ++i) {
    const auto dg = testing::random_dynamic(rng, 6, 14);
    const auto d = build_dendrogram(dg);
    ComicParams params;
    params.k = 3;
    params.auto_mains = 2;
    const auto comic = generate_comic(dg, "r", d, params);
    CHECK(comic.panels.size() == 3);
    for (const auto& p : comic.panels) {
      for (const auto& m : p.mains) {
        REQUIRE(p.find_node(m));
        CHECK(p.find_node(m)->role == NodeRole::main);
        CHECK(p.find_node(m)->color >= 0);
      }
      CHECK(std::is_sorted(p.nodes.begin(), p.nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
    }
  }
}

TEST_CASE("fixed layout keeps shared nodes at bit-identical coordinates") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  const auto comic = generate_comic(dg, "c", d, e2e_params());
  CHECK(comic.panels.size() == 9);
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> seen;
  std::size_t shared = 0;
  for (const auto& p : comic.panels) {
    for (const auto& n : p.nodes) {
      const auto bits = std::make_pair(std::bit_cast<std::uint64_t>(n.x), std::bit_cast<std::uint64_t>(n.y));
      auto [it, fresh] = seen.emplace(n.id, bits);
      if (!fresh) {
        ++shared;
        CHECK(it->second == bits);
      }
    }
  }
  CHECK(shared > 0);
}

TEST_CASE("generation is deterministic and independent of the execution policy") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  GenerateOptions serial;
  serial.exec = Exec::serial;
  const auto a = dump_template(generate_comic(dg, "c", d, e2e_params()));
  const auto b = dump_template(generate_comic(dg, "c", d, e2e_params()));
  const auto c = dump_template(generate_comic(dg, "c", d, e2e_params(), serial));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("timeline replace splits a panel into single time points") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  auto comic = generate_comic(dg, "c", d, e2e_params());
  std::size_t wide = 0;
  while (comic.panels[wide].span.length() < 2) ++wide;
  const Span span = comic.panels[wide].span;
  const std::size_t before = comic.panels.size();
  timeline_replace(comic, dg, wide, {span.end, span.start});
  CHECK(comic.panels.size() == before + 1);
  CHECK(comic.panels[wide].span == Span{span.start, span.start});
  CHECK(comic.panels[wide + 1].span == Span{span.end, span.end});
  CHECK_FALSE(comic.panels[wide].transition);
  for (std::size_t i = 1; i < comic.panels.size(); ++i) CHECK(comic.panels[i - 1].span.end + 1 <= comic.panels[i].span.start);
  CHECK_THROWS_AS(timeline_replace(comic, dg, 0, {dg.last_time()}), ValidationError);
  CHECK_THROWS_AS(timeline_replace(comic, dg, 99, {0}), ValidationError);
  CHECK_THROWS_AS(timeline_replace(comic, dg, 0, {}), ValidationError);
}

TEST_CASE("timeline add places insets inside the parent's bottom-right corner") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  auto comic = generate_comic(dg, "c", d, e2e_params());
  std::size_t wide = 0;
  while (comic.panels[wide].span.length() < 2) ++wide;
  const Span span = comic.panels[wide].span;
  const std::size_t before = comic.panels.size();
  timeline_add(comic, dg, wide, {span.start, span.end});
  CHECK(comic.panels.size() == before);
  const Panel& parent = comic.panels[wide];
  REQUIRE(parent.insets.size() == 2);
  for (const auto& inset : parent.insets) {
    CHECK(inset.frame.x >= parent.frame.width * 0.55 - 1e-9);
    CHECK(inset.frame.y >= parent.frame.height * 0.58 - 1e-9);
    CHECK(inset.frame.x + inset.frame.width <= parent.frame.width + 1e-9);
    CHECK(inset.frame.y + inset.frame.height <= parent.frame.height + 1e-9);
  }
  const auto& a = parent.insets[0].frame;
  const auto& b = parent.insets[1].frame;
  CHECK((a.x + a.width <= b.x || a.y + a.height <= b.y));
}

TEST_CASE("template JSON round-trips byte for byte") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  auto comic = generate_comic(dg, "c", d, e2e_params());
  timeline_add(comic, dg, 1, {comic.panels[1].span.start});
  comic.style.overrides["r001"] = StyleOverride{"#123456", 7.0, false};
  const auto timeline = build_timeline(detect_communities(dg, {}));
  add_community_overlays(comic, timeline, comic.panels[0].mains);
  const std::string text = dump_template(comic);
  const auto back = template_from_json(nlohmann::json::parse(text));
  CHECK(dump_template(back) == text);
  auto j = nlohmann::json::parse(text);
  j["panels"][0]["extra"] = 1;
  CHECK_THROWS_AS(template_from_json(j), SchemaError);
  j = nlohmann::json::parse(text);
  j["panels"][0]["nodes"][0]["x"] = "left";
  CHECK_THROWS_AS(template_from_json(j), SchemaError);
}

TEST_CASE("community overlays follow the character's community at the panel's last time") {
  const auto dg = coauthorship();
  const auto d = build_dendrogram(dg);
  auto comic = generate_comic(dg, "c", d, e2e_params());
  const auto timeline = build_timeline(detect_communities(dg, {}));
  std::vector<std::string> chars;
  for (const auto& p : comic.panels) chars.insert(chars.end(), p.mains.begin(), p.mains.end());
  add_community_overlays(comic, timeline, chars);
  std::size_t overlays = 0;
  for (const auto& p : comic.panels) {
    for (const auto& o : p.overlays) {
      ++overlays;
      CHECK(o.community.substr(0, o.community.find(':')) == std::to_string(p.span.end));
      for (const auto& m : o.members) CHECK(p.find_node(m));
    }
  }
  CHECK(overlays > 0);
}

TEST_CASE("parameter validation") {
  ComicParams p;
  p.level = 0.5;
  p.k = 2;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.k.reset();
  p.level = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.level = 0.5;
  p.top = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.top = 10.0;
  p.highlight = 20.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.highlight = 5.0;
  p.scope = "galaxy";
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.scope = "ego:A";
  CHECK_NOTHROW(p.validate());
  const auto d = build_dendrogram(testing::tri());
  CHECK_THROWS_AS(resolve_cut(d, ComicParams{}), ValidationError);
  const auto back = params_from_json(nlohmann::json::parse(to_json(p).dump()));
  CHECK(to_json(back) == to_json(p));
}

}
