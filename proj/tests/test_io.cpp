#include <doctest.h>

#include <filesystem>
#include <random>

#include "dgcomics/errors.hpp"
#include "dgcomics/io.hpp"
#include "dgcomics/store.hpp"
#include "support.hpp"

using namespace dgc;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& edges, const std::optional<std::string>& nodes = std::nullopt) {
  try {
    parse_csv(edges, nodes);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dgcomics-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("triangle CSV parses into the triangle fixture") {
  const auto dg = parse_csv(testing::kTriCsv, std::nullopt, {"tri", false});
  CHECK(dg.snapshots == testing::tri().snapshots);
  CHECK(dataset_id(dg) == dataset_id(testing::tri()));
}

TEST_CASE("single row and duplicate rows") {
  const auto one = parse_csv("time,source,target,weight\n2001,a,b,2.5\n");
  REQUIRE(one.snapshots.size() == 1);
  CHECK(one.snapshots[0].label == "2001");
  CHECK(one.snapshots[0].graph.nodes().size() == 2);
  CHECK(one.snapshots[0].graph.find_link(make_link_key("a", "b", false))->weight() == 2.5);

  const auto dup = parse_csv("time,source,target,weight,papers\n1,a,b,1,2\n1,b,a,2,3\n");
  const Link* l = dup.snapshots[0].graph.find_link(make_link_key("a", "b", false));
  REQUIRE(l);
  CHECK(l->weight() == 3.0);
  CHECK(l->attrs.get("papers") == 5.0);
}

TEST_CASE("times order numerically when every label is a number") {
  const auto dg = parse_csv("time,source,target,weight\n10,a,b,1\n9,a,b,1\n100,a,b,1\n");
  CHECK(dg.labels() == std::vector<std::string>{"9", "10", "100"});
  const auto lex = parse_csv("time,source,target,weight\nb,a,b,1\na,a,b,1\n");
  CHECK(lex.labels() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("quoted fields and node files") {
  const auto dg = parse_csv("time,source,target,weight\n1,\"x, y\",z,1\n",
                            "time,id,name,papers,cat:org,group\n1,\"x, y\",\"Dr \"\"X\"\"\",4,uni,north\n1,w,,1,lab,south\n");
  const auto& g = dg.snapshots[0].graph;
  REQUIRE(g.find_node("x, y"));
  CHECK(g.find_node("x, y")->display_name == "Dr \"X\"");
  CHECK(g.find_node("x, y")->attrs.get("papers") == 4.0);
  CHECK(g.find_node("x, y")->categories.at("org") == "uni");
  CHECK(g.find_node("x, y")->categories.at("group") == "north");
  CHECK(g.find_node("w"));
  CHECK(g.find_node("z"));
}

TEST_CASE("errors carry the line number") {
  CHECK(error_of("") == "edges: empty file");
  CHECK(error_of("time,source,target,weight\n") == "edges: no data rows");
  CHECK(error_of("time,src,target,weight\n1,a,b,1\n").find("edges:1:") == 0);
  CHECK(error_of("time,source,target,weight\n1,a,b,1\n1,a,b\n").find("edges:3: expected 4 fields") == 0);
  CHECK(error_of("time,source,target,weight\n1,a,b,1\n2,a,b,heavy\n").find("edges:3: weight 'heavy'") == 0);
  CHECK(error_of("time,source,target,weight\n1,a,a,1\n").find("edges:2: self-loop") == 0);
  CHECK(error_of("time,source,target,weight\n1,a,b,-1\n").find("edges:2:") == 0);
  CHECK(error_of("time,source,target,weight\n1,\"a,b,1\n").find("unterminated") != std::string::npos);
  CHECK(error_of("time,source,target,weight\n1,a,b,1\n", "time,id\n1,a\n1,a\n").find("nodes:3: duplicate node") == 0);
}

TEST_CASE("JSON round trip and strictness") {
  std::mt19937 rng(90);
  const auto dg = testing::random_dynamic(rng, 5);
  const auto text = to_json(dg).dump();
  const auto back = graph_from_json(nlohmann::json::parse(text));
  CHECK(back.snapshots == dg.snapshots);
  CHECK(to_json(back).dump() == text);

  auto j = nlohmann::json::parse(text);
  j["times"][0]["colour"] = "red";
  try {
    graph_from_json(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "/times/0/colour");
  }
  j = nlohmann::json::parse(to_json(testing::tri()).dump());
  j["times"][0]["links"][0]["target"] = "Z";
  try {
    graph_from_json(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("undeclared node 'Z'") != std::string::npos);
  }
  j = nlohmann::json::parse(to_json(testing::tri()).dump());
  j["times"][1]["t"] = 5;
  CHECK_THROWS_AS(graph_from_json(j), SchemaError);
}

TEST_CASE("CSV to JSON to CSV is idempotent") {
  std::mt19937 rng(91);
  for (int i = 0; i < 20; ++i) {
    auto dg = testing::random_dynamic(rng, 4);
    for (auto& s : dg.snapshots) {
      for (const auto& [id, n] : s.graph.nodes()) {
        Node m = n;
        m.categories["org"] = id < "n05" ? "east" : "west";
        s.graph.put_node(m);
      }
    }
    const CsvText first = to_csv(dg);
    const auto parsed = parse_csv(first.edges, first.nodes);
    const auto via_json = graph_from_json(nlohmann::json::parse(to_json(parsed).dump()));
    const CsvText second = to_csv(via_json);
    CHECK(second.edges == first.edges);
    CHECK(second.nodes == first.nodes);
    CHECK(dataset_id(via_json) == dataset_id(dg));
  }
}

TEST_CASE("dataset id ignores row order and the name") {
  const std::string rows[] = {"1,A,B,2\n", "0,A,B,1\n", "2,A,C,1\n", "1,C,A,1\n"};
  const auto a = parse_csv(std::string("time,source,target,weight\n") + rows[0] + rows[1] + rows[2] + rows[3], std::nullopt, {"x"});
  const auto b = parse_csv(std::string("time,source,target,weight\n") + rows[3] + rows[2] + rows[1] + rows[0], std::nullopt, {"y"});
  CHECK(dataset_id(a) == dataset_id(b));
  CHECK(dataset_id(a).size() == 16);
  const auto c = parse_csv("time,source,target,weight\n0,A,B,1\n1,A,B,2\n1,A,C,1\n2,A,C,2\n");
  CHECK(dataset_id(c) != dataset_id(a));
  CHECK(fnv1a("") == 14695981039346656037ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("files and the dataset store") {
  const fs::path dir = scratch("io");
  save_csv(testing::tri(), dir / "tri.csv", dir / "tri.nodes.csv");
  const auto loaded = load_dataset(dir / "tri.csv", dir / "tri.nodes.csv");
  CHECK(loaded.name == "tri");
  CHECK(loaded.snapshots == testing::tri().snapshots);
  save_json(loaded, dir / "tri.json");
  CHECK(load_dataset(dir / "tri.json").snapshots == loaded.snapshots);
  CHECK_THROWS_AS(load_dataset(dir / "missing.csv"), IoError);

  DatasetStore store(dir / "store");
  const auto m = store.put(loaded);
  CHECK(m.id == dataset_id(loaded));
  CHECK(m.times == std::vector<std::string>{"0", "1", "2"});
  CHECK(m.node_counts == std::vector<std::size_t>{2, 3, 2});
  CHECK(store.put(loaded).id == m.id);
  CHECK(store.contains(m.id));
  CHECK(fs::exists(dir / "store" / "datasets" / m.id / "graph.json"));
  DatasetStore reopened(dir / "store");
  CHECK(reopened.get(m.id)->snapshots == loaded.snapshots);
  CHECK(to_json(reopened.manifest(m.id)) == to_json(m));
  CHECK_THROWS_AS(reopened.get("0000000000000000"), NotFoundError);
  fs::remove_all(dir);
}

}
