#include "dgcomics/service.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "detail/json_read.hpp"
#include "dgcomics/errors.hpp"
#include "dgcomics/io.hpp"
#include "dgcomics/metrics.hpp"
#include "dgcomics/svg.hpp"

namespace dgc {

using nlohmann::json;
using nlohmann::ordered_json;
using detail::ObjectReader;

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = std::min(s.find(sep, pos), s.size());
    out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

HttpResponse json_response(int status, const ordered_json& j) {
  HttpResponse r;
  r.status = status;
  r.body = j.dump() + "\n";
  return r;
}

HttpResponse error_response(int status, const std::string& message, const std::string& path = "") {
  ordered_json j;
  j["error"] = message;
  if (!path.empty()) j["path"] = path;
  j["status"] = status;
  return json_response(status, j);
}

json parse_body(const HttpRequest& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw SchemaError("/", "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("request body is not valid JSON: {}", e.what()));
  }
}

std::string query(const HttpRequest& req, const std::string& key, const std::string& fallback = "") {
  auto it = req.query.find(key);
  return it == req.query.end() ? fallback : it->second;
}

double query_number(const HttpRequest& req, const std::string& key, double fallback) {
  auto it = req.query.find(key);
  if (it == req.query.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw SchemaError("?" + key, fmt::format("'{}' is not a number", it->second));
  }
}

EgoLevel query_ego(const HttpRequest& req, const std::string& key = "level") {
  try {
    return parse_ego_level(query(req, key, "1.5"));
  } catch (const ValidationError& e) {
    throw SchemaError("?" + key, e.what());
  }
}

int time_index(const DynamicGraph& dg, const json& v, const std::string& path) {
  std::string label;
  if (v.is_string()) {
    label = v.get<std::string>();
  } else if (v.is_number_integer()) {
    label = std::to_string(v.get<long long>());
  } else {
    throw SchemaError(path, "expected a time label");
  }
  const int t = dg.find_time(label);
  if (t < 0) throw SchemaError(path, fmt::format("unknown time '{}'", label));
  return t;
}

long version_of(const ObjectReader& r) {
  if (!r.has("version")) throw SchemaError(r.child("version"), "session mutations require the current version");
  return r.get<long>("version");
}

}  // namespace

Service::Service(ServiceOptions opts)
    : opts_(std::move(opts)), datasets_(opts_.data_dir), sessions_(opts_.data_dir) {}

std::shared_ptr<const Dendrogram> Service::dendrogram(const std::string& dataset, const Scope& scope,
                                                      Aggregation agg) {
  const std::string key = fmt::format("{}|{}|{}", dataset, scope.key(), to_string(agg));
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = dendrograms_.find(key); it != dendrograms_.end()) return it->second;
  }
  const auto dg = datasets_.get(dataset);
  if (scope.ego) {
    bool present = false;
    for (const auto& s : dg->snapshots) present = present || s.graph.has_node(*scope.ego);
    if (!present) throw NotFoundError(fmt::format("unknown node '{}'", *scope.ego));
  }
  ClusteringOptions co;
  co.agg = agg;
  co.exec = opts_.exec;
  auto d = std::make_shared<const Dendrogram>(build_dendrogram(*dg, scope, co));
  std::lock_guard lock(cache_mutex_);
  return dendrograms_.try_emplace(key, d).first->second;
}

std::shared_ptr<const CommunityTimeline> Service::communities(const std::string& dataset,
                                                              const CommunityMethod& method,
                                                              const TimelineOptions& opts) {
  const std::string key = fmt::format("{}|{}|{}|{}", dataset, method.str(), opts.theta, opts.delta);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = timelines_.find(key); it != timelines_.end()) return it->second;
  }
  const auto dg = datasets_.get(dataset);
  auto t = std::make_shared<const CommunityTimeline>(
      build_timeline(detect_communities(*dg, method, opts_.exec), opts));
  std::lock_guard lock(cache_mutex_);
  return timelines_.try_emplace(key, t).first->second;
}

HttpResponse Service::handle(const HttpRequest& req) {
  HttpResponse res;
  try {
    res = route(req);
  } catch (const SchemaError& e) {
    res = error_response(400, e.what(), e.path());
  } catch (const ValidationError& e) {
    res = error_response(400, e.what());
  } catch (const NotFoundError& e) {
    res = error_response(404, e.what());
  } catch (const ConflictError& e) {
    res = error_response(409, e.what());
  } catch (const IoError& e) {
    res = error_response(500, e.what());
  } catch (const ContractViolation& e) {
    res = error_response(500, fmt::format("internal error: {}", e.what()));
  } catch (const std::exception& e) {
    res = error_response(500, fmt::format("internal error: {}", e.what()));
  }
  res.headers["Access-Control-Allow-Origin"] = "*";
  res.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
  res.headers["Access-Control-Allow-Headers"] = "Content-Type";
  return res;
}

HttpResponse Service::route(const HttpRequest& req) {
  if (req.method == "OPTIONS") {
    HttpResponse r;
    r.status = 204;
    r.content_type = "text/plain";
    return r;
  }
  auto parts = split(req.path, '/');
  if (!parts.empty() && parts.front().empty()) parts.erase(parts.begin());
  if (!parts.empty() && parts.back().empty()) parts.pop_back();
  const auto n = parts.size();
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  auto at = [&](std::size_t i, const char* s) { return n > i && parts[i] == s; };

  if (n == 1 && at(0, "health") && get) return json_response(200, {{"status", "ok"}});

  if (at(0, "datasets")) {
    if (n == 1 && post) {
      DynamicGraph dg;
      const auto first = req.body.find_first_not_of(" \t\r\n");
      const bool looks_json = req.content_type.find("json") != std::string::npos ||
                              (first != std::string::npos && req.body[first] == '{');
      CsvOptions co;
      co.name = query(req, "name");
      co.directed = query(req, "directed") == "true";
      if (looks_json) {
        const json j = parse_body(req);
        if (j.contains("times")) {
          dg = graph_from_json(j);
        } else {
          ObjectReader r(j, "", {"edges", "nodes", "name", "directed"});
          co.name = r.get_or<std::string>("name", co.name);
          co.directed = r.get_or<bool>("directed", co.directed);
          std::optional<std::string> nodes;
          if (r.has("nodes")) nodes = r.get<std::string>("nodes");
          dg = parse_csv(r.get<std::string>("edges"), nodes, co);
        }
      } else {
        dg = parse_csv(req.body, std::nullopt, co);
      }
      if (!co.name.empty()) dg.name = co.name;
      return json_response(201, to_json(datasets_.put(dg)));
    }
    if (n < 2) return error_response(404, "no such route");
    const std::string& id = parts[1];
    if (n == 2 && get) return json_response(200, to_json(datasets_.manifest(id)));
    if (n == 3 && at(2, "dendrogram") && get) {
      const auto dg = datasets_.get(id);
      const Scope scope = Scope::parse(query(req, "scope", "whole"), query_ego(req));
      Aggregation agg = Aggregation::sum;
      try {
        agg = parse_aggregation(query(req, "agg", "sum"));
      } catch (const ValidationError& e) {
        throw SchemaError("?agg", e.what());
      }
      ordered_json j = to_json(*dendrogram(id, scope, agg), dg.get());
      j["scope"] = scope.key();
      return json_response(200, j);
    }
    if (n == 5 && at(2, "nodes") && at(4, "metrics") && get) {
      const auto dg = datasets_.get(id);
      const std::string& node = parts[3];
      bool present = false;
      for (const auto& s : dg->snapshots) present = present || s.graph.has_node(node);
      if (!present) throw NotFoundError(fmt::format("unknown node '{}'", node));
      Metric metric = Metric::degree;
      try {
        metric = parse_metric(query(req, "metric", "degree"));
      } catch (const ValidationError& e) {
        throw SchemaError("?metric", e.what());
      }
      ordered_json j;
      j["node"] = node;
      j["metric"] = to_string(metric);
      j["labels"] = dg->labels();
      j["series"] = ordered_json::array();
      for (const auto& v : node_metric_series(*dg, node, metric)) {
        j["series"].push_back(v ? ordered_json(*v) : ordered_json());
      }
      j["dissimilarity"] = consecutive_dissimilarity(*dg, node, query_ego(req, "ego"), {}, opts_.exec);
      return json_response(200, j);
    }
    if (n == 3 && at(2, "community") && get) {
      const auto dg = datasets_.get(id);
      CommunityMethod method;
      try {
        method = CommunityMethod::parse(query(req, "method", "louvain"));
      } catch (const ValidationError& e) {
        throw SchemaError("?method", e.what());
      }
      TimelineOptions to;
      to.theta = query_number(req, "theta", to.theta);
      to.delta = query_number(req, "delta", to.delta);
      const auto timeline = communities(id, method, to);
      std::vector<std::string> chars;
      if (const auto c = query(req, "chars"); !c.empty()) {
        for (auto& s : split(c, ',')) {
          if (!s.empty()) chars.push_back(s);
        }
      }
      ordered_json j = to_json(*timeline, dg.get());
      j["method"] = method.str();
      ordered_json paths = ordered_json::object();
      for (const auto& [ch, steps] : character_paths(*timeline, chars)) {
        ordered_json arr = ordered_json::array();
        for (const auto& s : steps) arr.push_back({{"t", s.time}, {"community", s.community}});
        paths[ch] = std::move(arr);
      }
      j["paths"] = std::move(paths);
      return json_response(200, j);
    }
    return error_response(404, "no such route");
  }

  if (at(0, "sessions")) {
    if (n == 1 && post) {
      const json body = parse_body(req);
      ObjectReader r(body, "", {"dataset"});
      const auto dataset = r.get<std::string>("dataset");
      datasets_.get(dataset);
      return json_response(201, to_json(sessions_.create(dataset)));
    }
    if (n < 2) return error_response(404, "no such route");
    const std::string& sid = parts[1];
    if (n == 2 && get) return json_response(200, to_json(sessions_.get(sid)));
    if (!post) return error_response(404, "no such route");

    if (n == 3 && at(2, "cut")) {
      const json body = parse_body(req);
      ObjectReader r(body, "", {"version", "level", "k", "scope", "ego", "auto_mains"});
      const long version = version_of(r);
      ordered_json summary;
      const Session s = sessions_.mutate(sid, version, [&](Session& s) {
        ComicParams p = s.params;
        p.level.reset();
        p.k.reset();
        if (r.has("level")) p.level = r.get<double>("level");
        if (r.has("k")) p.k = r.get<int>("k");
        p.scope = r.get_or<std::string>("scope", p.scope);
        if (r.has("ego")) p.ego = params_from_json(json{{"ego", body.at("ego")}}).ego;
        p.auto_mains = r.get_or<int>("auto_mains", p.auto_mains);
        p.validate();
        const auto dg = datasets_.get(s.dataset);
        const auto d = dendrogram(s.dataset, Scope::parse(p.scope, p.ego), p.agg);
        const Cut c = resolve_cut(*d, p);
        summary = cut_summary(*dg, *d, c, p.ego, p.auto_mains, {p.agg, {}, opts_.exec});
        s.params = p;
        s.cut = c;
      });
      summary["version"] = s.version;
      return json_response(200, summary);
    }

    if (n == 3 && at(2, "comic")) {
      json body = parse_body(req);
      ObjectReader r(body, "",
                     {"version", "level", "k", "scope", "ego", "top", "highlight", "layout", "mains", "auto_mains",
                      "agg", "canvas_width"});
      const long version = version_of(r);
      body.erase("version");
      std::string out;
      const Session s = sessions_.mutate(sid, version, [&](Session& s) {
        ComicParams p = s.params;
        const ComicParams given = params_from_json(body);
        if (body.contains("level") || body.contains("k")) {
          p.level = given.level;
          p.k = given.k;
        }
        if (body.contains("scope")) p.scope = given.scope;
        if (body.contains("ego")) p.ego = given.ego;
        if (body.contains("top")) p.top = given.top;
        if (body.contains("highlight")) p.highlight = given.highlight;
        if (body.contains("layout")) p.layout = given.layout;
        if (body.contains("mains")) p.mains = given.mains;
        if (body.contains("auto_mains")) p.auto_mains = given.auto_mains;
        if (body.contains("agg")) p.agg = given.agg;
        if (body.contains("canvas_width")) p.canvas_width = given.canvas_width;
        p.validate();
        const auto dg = datasets_.get(s.dataset);
        const auto d = dendrogram(s.dataset, Scope::parse(p.scope, p.ego), p.agg);
        GenerateOptions go;
        go.captions = opts_.captions;
        go.exec = opts_.exec;
        ComicTemplate comic = generate_comic(*dg, s.dataset, *d, p, go);
        s.params = p;
        s.cut = resolve_cut(*d, p);
        out = dump_template(comic);
        s.comic = std::move(comic);
      });
      HttpResponse res;
      res.body = out;
      res.headers["X-Session-Version"] = std::to_string(s.version);
      return res;
    }

    if (n == 5 && at(2, "panels") && at(4, "timeline")) {
      const json body = parse_body(req);
      ObjectReader r(body, "", {"version", "mode", "times"});
      const long version = version_of(r);
      const auto mode = r.get<std::string>("mode");
      if (mode != "add" && mode != "replace") throw SchemaError("/mode", "expected 'add' or 'replace'");
      std::size_t index = 0;
      try {
        std::size_t used = 0;
        index = std::stoul(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw NotFoundError(fmt::format("unknown panel '{}'", parts[3]));
      }
      const Session s = sessions_.mutate(sid, version, [&](Session& s) {
        if (!s.comic) throw ValidationError("the session has no comic yet");
        if (index >= s.comic->panels.size()) throw NotFoundError(fmt::format("unknown panel {}", index));
        const auto dg = datasets_.get(s.dataset);
        std::vector<int> times;
        const auto& arr = r.array("times");
        for (std::size_t i = 0; i < arr.size(); ++i) times.push_back(time_index(*dg, arr[i], fmt::format("/times/{}", i)));
        GenerateOptions go;
        go.captions = opts_.captions;
        go.exec = opts_.exec;
        if (mode == "replace") {
          timeline_replace(*s.comic, *dg, index, times, go);
        } else {
          timeline_add(*s.comic, *dg, index, times, go);
        }
      });
      ordered_json j;
      j["version"] = s.version;
      j["panels"] = to_json(*s.comic)["panels"];
      return json_response(200, j);
    }

    if (n == 3 && at(2, "edits")) {
      const json body = parse_body(req);
      ObjectReader r(body, "", {"version", "hide", "show", "overrides", "captions", "layout", "communities"});
      const long version = version_of(r);
      const Session s = sessions_.mutate(sid, version, [&](Session& s) {
        if (!s.comic) throw ValidationError("the session has no comic yet");
        auto& style = s.comic->style;
        for (const auto& id : r.get_or<std::vector<std::string>>("hide", {})) style.overrides[id].hidden = true;
        for (const auto& id : r.get_or<std::vector<std::string>>("show", {})) {
          if (auto it = style.overrides.find(id); it != style.overrides.end()) it->second.hidden = false;
        }
        if (r.has("overrides")) {
          const auto& ov = r.at("overrides");
          if (!ov.is_object()) throw SchemaError("/overrides", "expected an object");
          for (const auto& [id, o] : ov.items()) {
            ObjectReader orr(o, "/overrides/" + id, {"color", "radius"});
            auto& target = style.overrides[id];
            if (orr.has("color")) target.color = orr.get<std::string>("color");
            if (orr.has("radius")) target.radius = orr.get<double>("radius");
          }
        }
        for (auto it = style.overrides.begin(); it != style.overrides.end();) {
          const auto& o = it->second;
          it = !o.hidden && !o.color && !o.radius ? style.overrides.erase(it) : std::next(it);
        }
        if (r.has("captions")) {
          const auto& caps = r.at("captions");
          if (!caps.is_object()) throw SchemaError("/captions", "expected an object of panel index to text");
          for (const auto& [key, text] : caps.items()) {
            std::size_t idx = 0;
            try {
              idx = std::stoul(key);
            } catch (const std::exception&) {
              throw SchemaError("/captions/" + key, "expected a panel index");
            }
            if (idx >= s.comic->panels.size()) throw SchemaError("/captions/" + key, "no such panel");
            s.comic->panels[idx].caption.text = ObjectReader::as<std::string>(text, "/captions/" + key);
          }
        }
        const auto dg = datasets_.get(s.dataset);
        if (r.has("layout")) {
          try {
            s.comic->params.layout = parse_layout_mode(r.get<std::string>("layout"));
          } catch (const SchemaError&) {
            throw;
          } catch (const ValidationError& e) {
            throw SchemaError("/layout", e.what());
          }
          s.params.layout = s.comic->params.layout;
          GenerateOptions go;
          go.exec = opts_.exec;
          layout_comic(*s.comic, *dg, go);
        }
        if (r.has("communities")) {
          ObjectReader cr(r.at("communities"), "/communities", {"method", "chars"});
          const auto method = CommunityMethod::parse(cr.get_or<std::string>("method", "louvain"));
          const auto timeline = communities(s.dataset, method, {});
          add_community_overlays(*s.comic, *timeline, cr.get<std::vector<std::string>>("chars"));
        }
      });
      HttpResponse res;
      res.body = dump_template(*s.comic);
      res.headers["X-Session-Version"] = std::to_string(s.version);
      return res;
    }

    if (n == 3 && at(2, "export")) {
      const Session s = sessions_.get(sid);
      if (!s.comic) throw ValidationError("the session has no comic yet");
      HttpResponse res;
      res.content_type = "image/svg+xml";
      res.body = render_svg(*s.comic, opts_.exec);
      return res;
    }
  }
  return error_response(404, "no such route");
}

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    r.content_type = req.get_header_value("Content-Type");
    const HttpResponse out = service_.handle(r);
    res.status = out.status;
    for (const auto& [k, v] : out.headers) res.set_header(k, v);
    res.set_content(out.body, out.content_type);
  };
  const std::string any = R"(/.*)";
  server_->Get(any, handler);
  server_->Post(any, handler);
  server_->Options(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError(fmt::format("cannot listen on {}:{}", host, port));
  return bound;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace dgc
