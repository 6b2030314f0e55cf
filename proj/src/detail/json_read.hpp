#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dgcomics/errors.hpp"

namespace dgc::detail {

// Strict object reader: every key must be listed, and type errors carry a JSON pointer.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path, std::initializer_list<std::string_view> keys)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) throw SchemaError(child(key), "unknown key");
    }
  }

  std::string child(std::string_view key) const { return fmt::format("{}/{}", path_, key); }
  bool has(std::string_view key) const { return j_.contains(key) && !j_.at(std::string(key)).is_null(); }

  const nlohmann::json& at(std::string_view key) const {
    auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(child(key), "missing required key");
    return *it;
  }

  template <class T>
  T get(std::string_view key) const {
    return as<T>(at(key), child(key));
  }

  template <class T>
  T get_or(std::string_view key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  const nlohmann::json& array(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_array()) throw SchemaError(child(key), "expected an array");
    return v;
  }

 private:
  const nlohmann::json& j_;
  std::string path_;

 public:
  template <class T>
  static T as(const nlohmann::json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw SchemaError(path, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
    }
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path, e.what());
    }
  }
};

}  // namespace dgc::detail
