#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dgcomics/clustering.hpp"
#include "dgcomics/comic.hpp"

namespace dgc {

struct Session {
  std::string id;
  std::string dataset;
  long version = 0;  // bumped by every mutation
  ComicParams params;
  std::optional<Cut> cut;
  std::optional<ComicTemplate> comic;
};

nlohmann::ordered_json to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

// Sessions live in memory and are written to <root>/sessions/<id>.json after every change.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  Session create(const std::string& dataset);
  // Throws NotFoundError.
  Session get(const std::string& id);
  // Runs `fn` on the stored session if `expected_version` matches, then bumps the version and
  // persists. Throws ConflictError on a stale version.
  template <class Fn>
  Session mutate(const std::string& id, long expected_version, Fn&& fn) {
    std::lock_guard lock(mutex_);
    Session& s = load_locked(id);
    check_version(s, expected_version);
    Session next = s;
    fn(next);
    next.version = s.version + 1;
    persist(next);
    s = std::move(next);
    return s;
  }

 private:
  Session& load_locked(const std::string& id);
  static void check_version(const Session& s, long expected);
  void persist(const Session& s) const;
  std::filesystem::path file(const std::string& id) const;

  std::filesystem::path root_;
  std::mutex mutex_;
  std::map<std::string, Session> sessions_;
  unsigned long counter_ = 0;
};

}  // namespace dgc
