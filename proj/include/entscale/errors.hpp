#pragma once

#include <stdexcept>
#include <string>

namespace entscale {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (range, shape, missing breakpoint).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Iterative routine failed to converge, or a result broke a numerical invariant.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, model or symbol file. Line/column are 1-based; 0 means unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  int line_;
  int column_;
};

}  // namespace entscale
