#pragma once

#include <stdexcept>
#include <string>

namespace symform {

/// Precondition violated by the caller (bad shape, out-of-range node, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An eigen-solver or integrator produced something unusable.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed or does not match the schema.
/// `where()` is either "line:column" for syntax errors or a field path
/// such as "reference.segments[1].t_end" for schema violations.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)),
        message_(what) {}

  const std::string& where() const noexcept { return where_; }
  /// The description without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

}  // namespace symform
