#pragma once

#include <stdexcept>
#include <string>

namespace hstl {

// Raised for any syntax problem in formula text; carries the 1-based
// position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Raised when a formula cannot be evaluated against a trajectory
// (horizon overrun, unbounded operator, dimension mismatch).
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

// Raised for invalid option construction or execution requests.
class OptionError : public std::runtime_error {
 public:
  explicit OptionError(const std::string& message) : std::runtime_error(message) {}
};

// Raised for malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Raised when run artifacts cannot be read, parsed, or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace hstl
