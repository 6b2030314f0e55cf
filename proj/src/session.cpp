#include "dgcomics/session.hpp"

#include <chrono>

#include <fmt/format.h>

#include "detail/json_read.hpp"
#include "dgcomics/errors.hpp"
#include "dgcomics/io.hpp"

namespace dgc {

namespace fs = std::filesystem;
using detail::ObjectReader;

nlohmann::ordered_json to_json(const Session& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["dataset"] = s.dataset;
  j["version"] = s.version;
  j["params"] = to_json(s.params);
  j["cut"] = s.cut ? to_json(*s.cut) : nlohmann::ordered_json();
  j["comic"] = s.comic ? to_json(*s.comic) : nlohmann::ordered_json();
  return j;
}

Session session_from_json(const nlohmann::json& j) {
  ObjectReader r(j, "", {"id", "dataset", "version", "params", "cut", "comic"});
  Session s;
  s.id = r.get<std::string>("id");
  s.dataset = r.get<std::string>("dataset");
  s.version = r.get<long>("version");
  s.params = params_from_json(r.at("params"), "/params");
  if (r.has("cut")) {
    ObjectReader c(r.at("cut"), "/cut", {"level", "k", "clusters"});
    Cut cut;
    if (c.has("level")) cut.level = c.get<double>("level");
    if (c.has("k")) cut.k = c.get<int>("k");
    for (const auto& span : c.get<std::vector<std::vector<int>>>("clusters")) {
      if (span.size() != 2) throw SchemaError("/cut/clusters", "expected [start, end] pairs");
      cut.clusters.push_back({span[0], span[1]});
    }
    s.cut = std::move(cut);
  }
  if (r.has("comic")) s.comic = template_from_json(r.at("comic"));
  return s;
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {}

fs::path SessionStore::file(const std::string& id) const { return root_ / "sessions" / (id + ".json"); }

Session SessionStore::create(const std::string& dataset) {
  std::lock_guard lock(mutex_);
  Session s;
  s.dataset = dataset;
  const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
  do {
    s.id = fmt::format("s{:012x}", fnv1a(fmt::format("{}/{}/{}", dataset, now, ++counter_)) & 0xffffffffffffull);
  } while (sessions_.count(s.id) || fs::exists(file(s.id)));
  persist(s);
  sessions_.emplace(s.id, s);
  return s;
}

Session SessionStore::get(const std::string& id) {
  std::lock_guard lock(mutex_);
  return load_locked(id);
}

Session& SessionStore::load_locked(const std::string& id) {
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (id.empty() || id.find_first_not_of("0123456789abcdefs") != std::string::npos || !fs::exists(file(id))) {
    throw NotFoundError(fmt::format("unknown session '{}'", id));
  }
  Session s = session_from_json(nlohmann::json::parse(read_file(file(id))));
  return sessions_.emplace(id, std::move(s)).first->second;
}

void SessionStore::check_version(const Session& s, long expected) {
  if (expected != s.version) {
    throw ConflictError(fmt::format("session '{}' is at version {}, request was based on version {}", s.id, s.version,
                                    expected));
  }
}

void SessionStore::persist(const Session& s) const { write_file(file(s.id), to_json(s).dump() + "\n"); }

}  // namespace dgc
