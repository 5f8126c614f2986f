#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ontocrawl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Adding an edge (or merging two concepts) would close a cycle between
// concepts that are not synonyms. `path` lists the concept names along the
// existing chain that the new edge would close, from the proposed parent
// down to the proposed child.
class CycleError : public Error {
 public:
  CycleError(const std::string& what, std::vector<std::string> path)
      : Error(what), path_(std::move(path)) {}

  const std::vector<std::string>& path() const noexcept { return path_; }

 private:
  std::vector<std::string> path_;
};

// An invariant that the library maintains was found broken.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Failure to reach the knowledge backend. Retryable failures (timeouts,
// 429, 5xx) are retried by the client before this escapes.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

// A backend reply could not be interpreted.
class ParseError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  EncodingError(const std::string& what, std::string offending)
      : Error(what), offending_(std::move(offending)) {}

  const std::string& offending() const noexcept { return offending_; }

 private:
  std::string offending_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ontocrawl
