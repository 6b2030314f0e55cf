#include "dgcomics/cli.hpp"

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dgcomics/comic.hpp"
#include "dgcomics/errors.hpp"
#include "dgcomics/io.hpp"
#include "dgcomics/service.hpp"
#include "dgcomics/store.hpp"
#include "dgcomics/svg.hpp"

namespace dgc::cli {

namespace fs = std::filesystem;

namespace {

struct DatasetArgs {
  std::string input;
  std::string nodes;
  std::string name;
  bool directed = false;
};

void add_dataset_args(CLI::App* cmd, DatasetArgs& a) {
  cmd->add_option("dataset", a.input, "Edges CSV, graph JSON, or the id of a stored dataset")->required();
  cmd->add_option("--nodes", a.nodes, "Nodes CSV (time,id[,name][,attr...])");
  cmd->add_option("--name", a.name, "Dataset name");
  cmd->add_flag("--directed", a.directed, "Treat links as directed");
}

DynamicGraph load(const DatasetArgs& a) {
  CsvOptions co{a.name, a.directed};
  std::optional<fs::path> nodes;
  if (!a.nodes.empty()) nodes = a.nodes;
  if (fs::exists(a.input)) {
    DynamicGraph dg = load_dataset(a.input, nodes, co);
    if (!a.name.empty()) dg.name = a.name;
    return dg;
  }
  DatasetStore store(DatasetStore::default_root());
  if (store.contains(a.input)) return *store.get(a.input);
  throw IoError(fmt::format("'{}' is neither a file nor a stored dataset id", a.input));
}

EgoLevel ego_level(const std::string& s) { return parse_ego_level(s); }

fs::path sibling(const fs::path& p, const std::string& ext) {
  fs::path out = p;
  out.replace_extension(ext);
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph comics from dynamic graphs", "dgcomics"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log the merge sequence and progress to standard error");
  bool serial = false;
  app.add_flag("--serial", serial, "Disable parallel kernels");

  // ingest
  DatasetArgs ingest_args;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Validate a dataset, store it and print its manifest");
  add_dataset_args(ingest, ingest_args);
  ingest->add_option("--out", ingest_out, "Also write the canonical graph JSON here");

  // cluster
  DatasetArgs cluster_args;
  std::string cluster_out, cluster_scope = "whole", cluster_ego = "1.5", cluster_agg = "sum";
  auto* cluster = app.add_subcommand("cluster", "Build the time dendrogram");
  add_dataset_args(cluster, cluster_args);
  cluster->add_option("--out", cluster_out, "Dendrogram JSON output")->required();
  cluster->add_option("--scope", cluster_scope, "whole or ego:<node>");
  cluster->add_option("--ego", cluster_ego, "Ego level for ego scope (1.0 or 1.5)");
  cluster->add_option("--agg", cluster_agg, "Weight aggregation for merged snapshots (sum, max, last)");

  // generate
  DatasetArgs gen_args;
  std::optional<int> gen_k;
  std::optional<double> gen_level;
  std::string gen_out, gen_template, gen_captions, gen_ego = "1.5", gen_layout = "force", gen_scope = "whole",
                                                    gen_agg = "sum";
  ComicParams defaults;
  double gen_top = defaults.top, gen_highlight = defaults.highlight, gen_width = defaults.canvas_width;
  int gen_auto = defaults.auto_mains;
  std::vector<std::string> gen_mains;
  auto* generate = app.add_subcommand("generate", "Generate a comic template and its SVG rendering");
  add_dataset_args(generate, gen_args);
  generate->add_option("--k", gen_k, "Number of panels (clusters)");
  generate->add_option("--level", gen_level, "Dendrogram cut level in [0,1]");
  generate->add_option("--ego", gen_ego, "Ego level (1.0 or 1.5)");
  generate->add_option("--top", gen_top, "Percent of alters shown as supporting characters");
  generate->add_option("--highlight", gen_highlight, "Percent of alters highlighted");
  generate->add_option("--layout", gen_layout, "force, compact or fixed");
  generate->add_option("--main", gen_mains, "Main character id (repeatable); default picks automatically");
  generate->add_option("--auto-mains", gen_auto, "Automatic main characters per panel");
  generate->add_option("--scope", gen_scope, "Dendrogram scope: whole or ego:<node>");
  generate->add_option("--agg", gen_agg, "Weight aggregation (sum, max, last)");
  generate->add_option("--width", gen_width, "Canvas width");
  generate->add_option("--captions", gen_captions, "Caption template JSON");
  generate->add_option("--out", gen_out, "SVG output")->required();
  generate->add_option("--template", gen_template, "Template JSON output (default: --out with .json)");

  // export
  std::string export_in, export_out;
  auto* exporter = app.add_subcommand("export", "Render a template to SVG, or convert a dataset to JSON/CSV");
  exporter->add_option("input", export_in, "Comic template JSON, or a dataset file or id")->required();
  exporter->add_option("--out", export_out, "Output: .svg for templates; .json or .csv for datasets")->required();

  // serve
  int port = 8080;
  std::string host = "127.0.0.1", serve_captions;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--captions", serve_captions, "Caption template JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ERR: " << e.what() << "\n";
    return 1;
  }

  const Exec exec = serial ? Exec::serial : Exec::parallel;
  try {
    if (*ingest) {
      const DynamicGraph dg = load(ingest_args);
      DatasetStore store(DatasetStore::default_root());
      const DatasetManifest m = store.put(dg);
      if (!ingest_out.empty()) save_json(dg, ingest_out);
      out << to_json(m).dump(2) << "\n";
      return 0;
    }

    if (*cluster) {
      const DynamicGraph dg = load(cluster_args);
      ClusteringOptions co;
      co.agg = parse_aggregation(cluster_agg);
      co.exec = exec;
      if (verbose) {
        co.on_merge = [&](const MergeNode& m) {
          err << fmt::format("merge {}: {} + {} -> {} raw={:.6f}\n", m.id, dg.span_label(Span{m.span.start, m.span.start}),
                             dg.span_label(Span{m.span.end, m.span.end}), dg.span_label(m.span), m.raw);
        };
      }
      const Dendrogram d = build_dendrogram(dg, Scope::parse(cluster_scope, ego_level(cluster_ego)), co);
      write_file(cluster_out, to_json(d, &dg).dump(2) + "\n");
      return 0;
    }

    if (*generate) {
      ComicParams p;
      p.level = gen_level;
      p.k = gen_k;
      p.scope = gen_scope;
      p.ego = ego_level(gen_ego);
      p.top = gen_top;
      p.highlight = gen_highlight;
      p.layout = parse_layout_mode(gen_layout);
      p.mains = gen_mains;
      p.auto_mains = gen_auto;
      p.agg = parse_aggregation(gen_agg);
      p.canvas_width = gen_width;
      p.validate();
      if (!p.level && !p.k) throw ValidationError("generate needs --k or --level");

      GenerateOptions go;
      go.exec = exec;
      if (!gen_captions.empty()) go.captions = CaptionTemplates::load(gen_captions);

      const DynamicGraph dg = load(gen_args);
      for (const auto& m : p.mains) {
        bool present = false;
        for (const auto& s : dg.snapshots) present = present || s.graph.has_node(m);
        if (!present) throw ValidationError(fmt::format("--main '{}' is not a node of the dataset", m));
      }
      ClusteringOptions co;
      co.agg = p.agg;
      co.exec = exec;
      if (verbose) {
        co.on_merge = [&](const MergeNode& m) {
          err << fmt::format("merge {}: {} raw={:.6f}\n", m.id, dg.span_label(m.span), m.raw);
        };
      }
      const Dendrogram d = build_dendrogram(dg, Scope::parse(p.scope, p.ego), co);
      const ComicTemplate comic = generate_comic(dg, dataset_id(dg), d, p, go);
      const fs::path svg_path = gen_out;
      const fs::path template_path = gen_template.empty() ? sibling(svg_path, ".json") : fs::path(gen_template);
      if (template_path == svg_path) throw ValidationError("--template and --out must differ");
      write_file(template_path, dump_template(comic));
      write_file(svg_path, render_svg(comic, exec));
      if (verbose) {
        err << fmt::format("{} panels in {} tiers -> {}, {}\n", comic.panels.size(), comic.tiers,
                           template_path.string(), svg_path.string());
      }
      return 0;
    }

    if (*exporter) {
      const fs::path out_path = export_out;
      if (fs::exists(export_in) && fs::path(export_in).extension() == ".json") {
        const auto j = nlohmann::json::parse(read_file(export_in), nullptr, false);
        if (j.is_discarded()) throw ValidationError(fmt::format("'{}' is not valid JSON", export_in));
        if (j.is_object() && j.contains("schema")) {
          if (out_path.extension() != ".svg") throw ValidationError("templates export to .svg");
          write_file(out_path, render_svg(template_from_json(j), exec));
          return 0;
        }
      }
      const DynamicGraph dg = load(DatasetArgs{export_in, "", "", false});
      if (out_path.extension() == ".json") {
        save_json(dg, out_path);
      } else if (out_path.extension() == ".csv") {
        fs::path nodes = out_path;
        nodes.replace_extension(".nodes.csv");
        save_csv(dg, out_path, nodes);
      } else {
        throw ValidationError("datasets export to .json or .csv");
      }
      return 0;
    }

    if (*serve) {
      ServiceOptions so;
      so.data_dir = DatasetStore::default_root();
      so.exec = exec;
      if (!serve_captions.empty()) so.captions = CaptionTemplates::load(serve_captions);
      Service service(so);
      HttpServer server(service);
      const int bound = server.bind(host, port);
      out << fmt::format("listening on http://{}:{} (data: {})", host, bound, so.data_dir.string()) << std::endl;
      server.run();
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "ERR: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "ERR: " << e.what() << "\n";
    return 2;
  } catch (const NotFoundError& e) {
    err << "ERR: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "ERR: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "ERR: internal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dgc::cli
