#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vidgraph {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A persisted document does not follow its schema. The message carries a
/// JSON-pointer-like path into the document.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Argument outside the operation's domain (threshold out of range, empty set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A referenced shot/concept/user does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// An upstream pipeline artifact is missing or was built from different inputs.
class StaleInputError : public Error {
 public:
  explicit StaleInputError(const std::string& what) : Error("stale input: " + what) {}
};

}  // namespace vidgraph
