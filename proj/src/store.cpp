#include "dgcomics/store.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"

namespace dgc {

namespace fs = std::filesystem;

namespace {

bool valid_id(const std::string& id) {
  return id.size() == 16 && id.find_first_not_of("0123456789abcdef") == std::string::npos;
}

}  // namespace

DatasetStore::DatasetStore(fs::path root) : root_(std::move(root)) {}

fs::path DatasetStore::default_root() {
  if (const char* env = std::getenv("DGCOMICS_DATA_DIR"); env && *env) return env;
  return fs::current_path() / "dgcomics-data";
}

fs::path DatasetStore::dir(const std::string& id) const { return root_ / "datasets" / id; }

DatasetManifest DatasetStore::put(const DynamicGraph& dg) {
  DatasetManifest m = make_manifest(dg);
  std::lock_guard lock(mutex_);
  const fs::path d = dir(m.id);
  if (!fs::exists(d / "manifest.json")) {
    save_json(dg, d / "graph.json");
    write_file(d / "manifest.json", to_json(m).dump(2) + "\n");
  }
  cache_.try_emplace(m.id, std::make_shared<const DynamicGraph>(dg));
  return m;
}

bool DatasetStore::contains(const std::string& id) const {
  return valid_id(id) && fs::exists(dir(id) / "graph.json");
}

std::shared_ptr<const DynamicGraph> DatasetStore::get(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  if (!contains(id)) throw NotFoundError(fmt::format("unknown dataset '{}'", id));
  auto dg = std::make_shared<const DynamicGraph>(load_json(dir(id) / "graph.json"));
  cache_.emplace(id, dg);
  return dg;
}

DatasetManifest DatasetStore::manifest(const std::string& id) { return make_manifest(*get(id)); }

}  // namespace dgc
