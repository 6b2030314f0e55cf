#include "dgcomics/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "detail/json_read.hpp"
#include "dgcomics/errors.hpp"

namespace dgc {

namespace fs = std::filesystem;
using detail::ObjectReader;

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// RFC 4180 fields: quotes, doubled quotes inside quotes, CRLF or LF line ends.
std::vector<CsvRow> split_csv(const std::string& text, const std::string& what) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  row.line = 1;
  auto end_row = [&] {
    row.cells.push_back(std::move(cell));
    cell.clear();
    const bool blank = row.cells.size() == 1 && row.cells[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row.line = line;
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    if (c == '"' && cell.empty()) {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.cells.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      ++line;
      end_row();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] != '\n') throw ValidationError(fmt::format("{}:{}: stray carriage return", what, line));
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw ValidationError(fmt::format("{}:{}: unterminated quoted field", what, row.line));
  if (any || !cell.empty()) end_row();
  return rows;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> order_times(const std::set<std::string>& labels) {
  std::vector<std::string> out(labels.begin(), labels.end());
  const bool numeric = std::all_of(out.begin(), out.end(), [](const std::string& s) { return parse_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
      const double x = *parse_number(a), y = *parse_number(b);
      return x != y ? x < y : a < b;
    });
  }
  return out;
}

std::vector<std::string> header_of(const std::vector<CsvRow>& rows, const std::string& what,
                                   std::initializer_list<const char*> required) {
  if (rows.empty()) throw ValidationError(fmt::format("{}: empty file", what));
  std::vector<std::string> header;
  for (const auto& c : rows[0].cells) header.push_back(trim(c));
  std::size_t i = 0;
  for (const char* r : required) {
    if (i >= header.size() || header[i] != r) {
      throw ValidationError(fmt::format("{}:{}: header column {} must be '{}'", what, rows[0].line, i + 1, r));
    }
    ++i;
  }
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (h.empty()) throw ValidationError(fmt::format("{}:{}: empty column name", what, rows[0].line));
    if (!seen.insert(h).second) throw ValidationError(fmt::format("{}:{}: duplicate column '{}'", what, rows[0].line, h));
  }
  return header;
}

struct NodeRow {
  std::size_t line;
  std::string id;
  Node node;
};

}  // namespace

DynamicGraph parse_csv(const std::string& edges, const std::optional<std::string>& nodes, const CsvOptions& opts) {
  const std::string ewhat = "edges";
  const auto erows = split_csv(edges, ewhat);
  const auto eheader = header_of(erows, ewhat, {"time", "source", "target", "weight"});
  if (erows.size() < 2 && !nodes) throw ValidationError(fmt::format("{}: no data rows", ewhat));

  std::set<std::string> labels;
  // time label -> link key -> attrs
  std::map<std::string, std::map<LinkKey, AttributeVector>> links;
  std::map<std::string, std::set<std::string>> link_nodes;
  for (std::size_t r = 1; r < erows.size(); ++r) {
    const auto& row = erows[r];
    if (row.cells.size() != eheader.size()) {
      throw ValidationError(
          fmt::format("{}:{}: expected {} fields, got {}", ewhat, row.line, eheader.size(), row.cells.size()));
    }
    const std::string time = trim(row.cells[0]);
    const std::string source = trim(row.cells[1]);
    const std::string target = trim(row.cells[2]);
    if (time.empty()) throw ValidationError(fmt::format("{}:{}: empty time", ewhat, row.line));
    if (source.empty() || target.empty()) throw ValidationError(fmt::format("{}:{}: empty node id", ewhat, row.line));
    if (source == target) throw ValidationError(fmt::format("{}:{}: self-loop on '{}'", ewhat, row.line, source));
    const auto weight = parse_number(trim(row.cells[3]));
    if (!weight) throw ValidationError(fmt::format("{}:{}: weight '{}' is not a number", ewhat, row.line, row.cells[3]));
    if (!(*weight > 0.0)) throw ValidationError(fmt::format("{}:{}: weight must be > 0", ewhat, row.line));
    auto& attrs = links[time][make_link_key(source, target, opts.directed)];
    try {
      attrs.add("weight", *weight);
      for (std::size_t c = 4; c < eheader.size(); ++c) {
        const std::string cell = trim(row.cells[c]);
        if (cell.empty()) continue;
        const auto v = parse_number(cell);
        if (!v) throw ValidationError(fmt::format("column '{}' value '{}' is not a number", eheader[c], cell));
        attrs.add(eheader[c], *v);
      }
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", ewhat, row.line, e.what()));
    }
    labels.insert(time);
    link_nodes[time].insert(source);
    link_nodes[time].insert(target);
  }

  std::map<std::string, std::map<std::string, Node>> node_rows;
  if (nodes) {
    const std::string nwhat = "nodes";
    const auto nrows = split_csv(*nodes, nwhat);
    const auto nheader = header_of(nrows, nwhat, {"time", "id"});
    std::vector<bool> numeric(nheader.size(), true);
    for (std::size_t c = 2; c < nheader.size(); ++c) {
      if (nheader[c] == "name" || nheader[c].rfind("cat:", 0) == 0) {
        numeric[c] = false;
        continue;
      }
      for (std::size_t r = 1; r < nrows.size(); ++r) {
        if (c < nrows[r].cells.size()) {
          const std::string cell = trim(nrows[r].cells[c]);
          if (!cell.empty() && !parse_number(cell)) numeric[c] = false;
        }
      }
    }
    for (std::size_t r = 1; r < nrows.size(); ++r) {
      const auto& row = nrows[r];
      if (row.cells.size() != nheader.size()) {
        throw ValidationError(
            fmt::format("{}:{}: expected {} fields, got {}", nwhat, row.line, nheader.size(), row.cells.size()));
      }
      const std::string time = trim(row.cells[0]);
      const std::string id = trim(row.cells[1]);
      if (time.empty()) throw ValidationError(fmt::format("{}:{}: empty time", nwhat, row.line));
      if (id.empty()) throw ValidationError(fmt::format("{}:{}: empty node id", nwhat, row.line));
      Node node;
      node.id = id;
      try {
        for (std::size_t c = 2; c < nheader.size(); ++c) {
          const std::string cell = trim(row.cells[c]);
          if (cell.empty()) continue;
          if (nheader[c] == "name") {
            node.display_name = cell;
          } else if (!numeric[c]) {
            const std::string key = nheader[c].rfind("cat:", 0) == 0 ? nheader[c].substr(4) : nheader[c];
            if (key.empty()) throw ValidationError("empty category name");
            node.categories[key] = cell;
          } else {
            node.attrs.set(nheader[c], *parse_number(cell));
          }
        }
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}:{}: {}", nwhat, row.line, e.what()));
      }
      if (!node_rows[time].emplace(id, std::move(node)).second) {
        throw ValidationError(fmt::format("{}:{}: duplicate node '{}' at time '{}'", nwhat, row.line, id, time));
      }
      labels.insert(time);
    }
  }
  if (labels.empty()) throw ValidationError("no data rows");

  DynamicGraph dg;
  dg.name = opts.name;
  dg.directed = opts.directed;
  int t = 0;
  for (const auto& label : order_times(labels)) {
    Snapshot s{t++, label, Graph(opts.directed)};
    std::map<std::string, Node> here;
    if (auto it = node_rows.find(label); it != node_rows.end()) here = it->second;
    for (const auto& id : link_nodes[label]) here.try_emplace(id, Node{id, {}, {}, {}});
    for (auto& [id, node] : here) s.graph.add_node(std::move(node));
    for (auto& [key, attrs] : links[label]) s.graph.put_link(Link{key, std::move(attrs)});
    dg.snapshots.push_back(std::move(s));
  }
  return dg;
}

DynamicGraph load_csv(const fs::path& edges, const std::optional<fs::path>& nodes, const CsvOptions& opts) {
  CsvOptions o = opts;
  if (o.name.empty()) o.name = edges.stem().string();
  std::optional<std::string> ntext;
  if (nodes) ntext = read_file(*nodes);
  try {
    return parse_csv(read_file(edges), ntext, o);
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", edges.filename().string(), e.what()));
  }
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num_cell(double v) {
  // Shortest round-trip representation.
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

CsvText to_csv(const DynamicGraph& dg) {
  std::set<std::string> link_attrs, node_attrs, cats;
  bool names = false;
  for (const auto& s : dg.snapshots) {
    for (const auto& [key, link] : s.graph.links()) {
      for (const auto& [k, v] : link.attrs.entries()) {
        if (k != "weight") link_attrs.insert(k);
      }
    }
    for (const auto& [id, node] : s.graph.nodes()) {
      for (const auto& [k, v] : node.attrs.entries()) node_attrs.insert(k);
      for (const auto& [k, v] : node.categories) cats.insert(k);
      names = names || !node.display_name.empty();
    }
  }
  CsvText out;
  out.edges = "time,source,target,weight";
  for (const auto& k : link_attrs) out.edges += "," + csv_cell(k);
  out.edges += "\n";
  out.nodes = "time,id";
  if (names) out.nodes += ",name";
  for (const auto& k : node_attrs) out.nodes += "," + csv_cell(k);
  for (const auto& k : cats) out.nodes += "," + csv_cell("cat:" + k);
  out.nodes += "\n";
  for (const auto& s : dg.snapshots) {
    for (const auto& [key, link] : s.graph.links()) {
      out.edges += fmt::format("{},{},{},{}", csv_cell(s.label), csv_cell(key.source), csv_cell(key.target),
                               num_cell(link.weight()));
      for (const auto& k : link_attrs) out.edges += "," + (link.attrs.contains(k) ? num_cell(link.attrs.get(k)) : "");
      out.edges += "\n";
    }
    for (const auto& [id, node] : s.graph.nodes()) {
      out.nodes += csv_cell(s.label) + "," + csv_cell(id);
      if (names) out.nodes += "," + csv_cell(node.display_name);
      for (const auto& k : node_attrs) out.nodes += "," + (node.attrs.contains(k) ? num_cell(node.attrs.get(k)) : "");
      for (const auto& k : cats) {
        auto it = node.categories.find(k);
        out.nodes += "," + (it == node.categories.end() ? std::string() : csv_cell(it->second));
      }
      out.nodes += "\n";
    }
  }
  return out;
}

void save_csv(const DynamicGraph& dg, const fs::path& edges, const fs::path& nodes) {
  const auto text = to_csv(dg);
  write_file(edges, text.edges);
  write_file(nodes, text.nodes);
}

nlohmann::ordered_json to_json(const DynamicGraph& dg) {
  nlohmann::ordered_json j;
  j["name"] = dg.name;
  j["directed"] = dg.directed;
  nlohmann::ordered_json times = nlohmann::ordered_json::array();
  for (const auto& s : dg.snapshots) {
    nlohmann::ordered_json sj;
    sj["t"] = s.time;
    sj["label"] = s.label;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& [id, node] : s.graph.nodes()) {
      nlohmann::ordered_json nj;
      nj["id"] = id;
      if (!node.display_name.empty()) nj["name"] = node.display_name;
      if (!node.attrs.empty()) {
        nj["attrs"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : node.attrs.entries()) nj["attrs"][k] = v;
      }
      if (!node.categories.empty()) nj["categories"] = node.categories;
      nodes.push_back(std::move(nj));
    }
    sj["nodes"] = std::move(nodes);
    nlohmann::ordered_json links = nlohmann::ordered_json::array();
    for (const auto& [key, link] : s.graph.links()) {
      nlohmann::ordered_json lj;
      lj["source"] = key.source;
      lj["target"] = key.target;
      lj["weight"] = link.weight();
      if (link.attrs.size() > 1) {
        lj["attrs"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : link.attrs.entries()) {
          if (k != "weight") lj["attrs"][k] = v;
        }
      }
      links.push_back(std::move(lj));
    }
    sj["links"] = std::move(links);
    times.push_back(std::move(sj));
  }
  j["times"] = std::move(times);
  return j;
}

namespace {

AttributeVector attrs_from(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  AttributeVector a;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw SchemaError(path + "/" + k, "expected a number");
    try {
      a.set(k, v.get<double>());
    } catch (const ValidationError& e) {
      throw SchemaError(path + "/" + k, e.what());
    }
  }
  return a;
}

}  // namespace

DynamicGraph graph_from_json(const nlohmann::json& j) {
  ObjectReader r(j, "", {"name", "directed", "times"});
  DynamicGraph dg;
  dg.name = r.get_or<std::string>("name", "");
  dg.directed = r.get_or<bool>("directed", false);
  const auto& times = r.array("times");
  if (times.empty()) throw SchemaError("/times", "at least one time point is required");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string tp = fmt::format("/times/{}", i);
    ObjectReader tr(times[i], tp, {"t", "label", "nodes", "links"});
    Snapshot s;
    s.time = tr.get<int>("t");
    if (s.time != static_cast<int>(i)) throw SchemaError(tr.child("t"), fmt::format("expected {}", i));
    s.label = tr.get_or<std::string>("label", std::to_string(i));
    if (!labels.insert(s.label).second) throw SchemaError(tr.child("label"), fmt::format("duplicate label '{}'", s.label));
    s.graph = Graph(dg.directed);
    const auto& nodes = tr.array("nodes");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const std::string np = fmt::format("{}/{}", tr.child("nodes"), n);
      ObjectReader nr(nodes[n], np, {"id", "name", "attrs", "categories"});
      Node node;
      node.id = nr.get<std::string>("id");
      node.display_name = nr.get_or<std::string>("name", "");
      if (nr.has("attrs")) node.attrs = attrs_from(nr.at("attrs"), nr.child("attrs"));
      if (nr.has("categories")) node.categories = nr.get<std::map<std::string, std::string>>("categories");
      try {
        s.graph.add_node(std::move(node));
      } catch (const ValidationError& e) {
        throw SchemaError(np, e.what());
      }
    }
    const auto& links = tr.array("links");
    for (std::size_t l = 0; l < links.size(); ++l) {
      const std::string lp = fmt::format("{}/{}", tr.child("links"), l);
      ObjectReader lr(links[l], lp, {"source", "target", "weight", "attrs"});
      const auto source = lr.get<std::string>("source");
      const auto target = lr.get<std::string>("target");
      AttributeVector attrs;
      if (lr.has("attrs")) {
        attrs = attrs_from(lr.at("attrs"), lr.child("attrs"));
        if (attrs.contains("weight")) throw SchemaError(lr.child("attrs") + "/weight", "weight belongs in the link");
      }
      try {
        attrs.set("weight", lr.get<double>("weight"));
      } catch (const SchemaError&) {
        throw;
      } catch (const ValidationError& e) {
        throw SchemaError(lr.child("weight"), e.what());
      }
      for (const auto* id : {&source, &target}) {
        if (!s.graph.has_node(*id)) throw SchemaError(lp, fmt::format("link references undeclared node '{}'", *id));
      }
      try {
        s.graph.add_link(source, target, std::move(attrs));
      } catch (const ValidationError& e) {
        throw SchemaError(lp, e.what());
      }
    }
    dg.snapshots.push_back(std::move(s));
  }
  return dg;
}

DynamicGraph load_json(const fs::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.filename().string(), e.what()));
  }
  DynamicGraph dg = graph_from_json(j);
  if (dg.name.empty()) dg.name = path.stem().string();
  return dg;
}

void save_json(const DynamicGraph& dg, const fs::path& path) { write_file(path, to_json(dg).dump(2) + "\n"); }

DynamicGraph load_dataset(const fs::path& path, const std::optional<fs::path>& nodes, const CsvOptions& opts) {
  if (path.extension() == ".json") {
    if (nodes) throw ValidationError("a nodes file only applies to CSV input");
    return load_json(path);
  }
  return load_csv(path, nodes, opts);
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string dataset_id(const DynamicGraph& dg) {
  auto j = to_json(dg);
  j.erase("name");
  return fmt::format("{:016x}", fnv1a(j.dump()));
}

DatasetManifest make_manifest(const DynamicGraph& dg) {
  DatasetManifest m;
  m.id = dataset_id(dg);
  m.name = dg.name;
  m.directed = dg.directed;
  std::set<std::string> na, la, nc;
  for (const auto& s : dg.snapshots) {
    m.times.push_back(s.label);
    m.node_counts.push_back(s.graph.nodes().size());
    m.link_counts.push_back(s.graph.links().size());
    for (const auto& [id, node] : s.graph.nodes()) {
      for (const auto& [k, v] : node.attrs.entries()) na.insert(k);
      for (const auto& [k, v] : node.categories) nc.insert(k);
    }
    for (const auto& [key, link] : s.graph.links()) {
      for (const auto& [k, v] : link.attrs.entries()) la.insert(k);
    }
  }
  m.node_attributes.assign(na.begin(), na.end());
  m.link_attributes.assign(la.begin(), la.end());
  m.node_categories.assign(nc.begin(), nc.end());
  return m;
}

nlohmann::ordered_json to_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["id"] = m.id;
  j["name"] = m.name;
  j["directed"] = m.directed;
  j["times"] = m.times;
  j["node_counts"] = m.node_counts;
  j["link_counts"] = m.link_counts;
  j["aggregation"] = m.aggregation;
  j["attributes"] = {{"node", m.node_attributes}, {"link", m.link_attributes}, {"categories", m.node_categories}};
  return j;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << content;
    out.flush();
    if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot replace '{}': {}", path.string(), ec.message()));
}

}  // namespace dgc
