#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraclab {

/// Bad input: malformed expressions, bound violations, degenerate meshes,
/// parameter ranges. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression syntax error; `position()` is a 0-based byte offset.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError("at position " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Numeric breakdown (bracket failure, corrupt mesh distances, line-search
/// failure). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraclab
