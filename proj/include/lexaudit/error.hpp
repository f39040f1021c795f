#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexaudit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input was well-formed but violates a domain constraint.
/// `field` names the offending input where one exists.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed input. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Incompatible combination of options (e.g. profile vs dictionary category).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Operation not permitted in the current state (e.g. resolving a pending term).
class ConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexaudit
