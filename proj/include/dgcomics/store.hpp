#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "dgcomics/graph.hpp"
#include "dgcomics/io.hpp"

namespace dgc {

// Content-addressed dataset directory: <root>/datasets/<id>/{graph.json, manifest.json}.
class DatasetStore {
 public:
  explicit DatasetStore(std::filesystem::path root);
  // $DGCOMICS_DATA_DIR, or ./dgcomics-data.
  static std::filesystem::path default_root();

  const std::filesystem::path& root() const noexcept { return root_; }
  // Idempotent: storing the same graph twice keeps one copy.
  DatasetManifest put(const DynamicGraph& dg);
  bool contains(const std::string& id) const;
  // Throws NotFoundError.
  std::shared_ptr<const DynamicGraph> get(const std::string& id);
  DatasetManifest manifest(const std::string& id);

 private:
  std::filesystem::path dir(const std::string& id) const;

  std::filesystem::path root_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const DynamicGraph>> cache_;
};

}  // namespace dgc
