#pragma once

#include <stdexcept>
#include <string>

namespace dgc {

// Bad input: malformed files, out-of-range parameters, schema violations.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A JSON document failed the strict schema; path() is a JSON pointer.
class SchemaError : public ValidationError {
 public:
  SchemaError(std::string path, const std::string& message)
      : ValidationError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Filesystem failures (missing files, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown dataset, session or panel id.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A session mutation carried a stale version.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (e.g. union of non-adjacent spans).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dgc
