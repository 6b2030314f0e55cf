#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgcomics/graph.hpp"

namespace dgc {

struct CsvOptions {
  std::string name;
  bool directed = false;
};

// Edges: header `time,source,target,weight[,attr...]`; extra columns are numeric link attributes.
// Nodes: header `time,id[,name][,attr...]`; numeric columns become attributes, others (or
// columns named `cat:<key>`) categorical values. Rows with the same (time, source, target)
// are summed. Times are ordered numerically when all are numbers, else lexicographically.
DynamicGraph parse_csv(const std::string& edges, const std::optional<std::string>& nodes = std::nullopt,
                       const CsvOptions& opts = {});
DynamicGraph load_csv(const std::filesystem::path& edges, const std::optional<std::filesystem::path>& nodes = {},
                      const CsvOptions& opts = {});

struct CsvText {
  std::string edges;
  std::string nodes;
};
CsvText to_csv(const DynamicGraph& dg);
void save_csv(const DynamicGraph& dg, const std::filesystem::path& edges, const std::filesystem::path& nodes);

// {name, directed, times:[{t, label, nodes:[{id, name, attrs, categories}], links:[{source, target, weight, attrs}]}]}
nlohmann::ordered_json to_json(const DynamicGraph& dg);
DynamicGraph graph_from_json(const nlohmann::json& j);
DynamicGraph load_json(const std::filesystem::path& path);
void save_json(const DynamicGraph& dg, const std::filesystem::path& path);

// .json files are read as JSON, anything else as an edges CSV.
DynamicGraph load_dataset(const std::filesystem::path& path, const std::optional<std::filesystem::path>& nodes = {},
                          const CsvOptions& opts = {});

// 16 hex digits of FNV-1a over the canonical JSON without the name.
std::string dataset_id(const DynamicGraph& dg);

struct DatasetManifest {
  std::string id;
  std::string name;
  bool directed = false;
  std::vector<std::string> times;
  std::vector<std::size_t> node_counts;
  std::vector<std::size_t> link_counts;
  std::string aggregation = "sum";
  std::vector<std::string> node_attributes;
  std::vector<std::string> link_attributes;
  std::vector<std::string> node_categories;
};
DatasetManifest make_manifest(const DynamicGraph& dg);
nlohmann::ordered_json to_json(const DatasetManifest& m);

std::string read_file(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& content);

std::uint64_t fnv1a(std::string_view data);

}  // namespace dgc
