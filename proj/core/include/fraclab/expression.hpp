#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fraclab {

/// A point in R^1 or R^2. In 1D the second component is unused and zero.
using Point = std::array<double, 2>;

/// Which point-variables an expression may reference.
enum class VariableSet {
  point,  ///< x, x1, x2
  pair,   ///< x, x1, x2, y, y1, y2
};

/// Variable usage summary, used to check dimension compatibility.
struct VariableUsage {
  bool x_scalar = false;  ///< bare `x` (1D only)
  bool y_scalar = false;
  bool x1 = false;
  bool x2 = false;
  bool y1 = false;
  bool y2 = false;

  bool any_y() const { return y_scalar || y1 || y2; }
  bool any() const { return x_scalar || x1 || x2 || any_y(); }
  /// Smallest spatial dimension in which every referenced variable exists,
  /// or 0 if the usage mixes 1D-only (`x`) with 2D-only (`x2`) names.
  int required_dimension() const;
  bool compatible_with(int dimension) const;
};

/// A compiled arithmetic expression over x = (x1, x2) and y = (y1, y2).
///
/// Grammar: decimal literals (optionally with an exponent part), the
/// identifiers x, y, x1, x2, y1, y2, binary + - * / ^, unary + -,
/// parentheses, and the functions sin cos exp abs sqrt (one argument) and
/// min max (two arguments). `*` and `/` bind tighter than `+` and `-`;
/// unary minus binds tighter than `*` but looser than `^`; `^` binds
/// tightest. Operators of equal precedence associate left to right, so
/// `2^3^2` is `(2^3)^2 = 64`.
///
/// Named references such as `p(x)` or `p(y, x)` are resolved at parse time
/// against a table of previously parsed expressions and inlined with the
/// arguments substituted; the arguments must be the bare point symbols
/// `x` or `y`.
class Expression {
 public:
  struct Reference {
    const Expression* expression;
    int arguments;  ///< 1 for point expressions, 2 for pair expressions
  };
  using ReferenceTable = std::map<std::string, Reference, std::less<>>;

  /// Throws ParseError on malformed input or variables outside `allowed`.
  static Expression parse(std::string_view source, VariableSet allowed,
                          const ReferenceTable& references = {});
  static Expression constant(double value);

  double operator()(const Point& x, const Point& y = Point{}) const noexcept;

  bool is_constant() const noexcept { return constant_; }
  /// Only meaningful when is_constant().
  double constant_value() const noexcept { return value_; }
  const VariableUsage& usage() const noexcept { return usage_; }
  const std::string& source() const noexcept { return source_; }

  /// The expression with the roles of x and y exchanged.
  Expression swapped() const;
  /// Same code, different display text.
  Expression renamed(std::string source) const;

  enum class Op : std::uint8_t {
    push_const, push_var, neg, add, sub, mul, div, pow,
    sin, cos, exp, abs, sqrt, min, max,
  };
  struct Instruction {
    Op op;
    std::uint8_t var = 0;  ///< 0:x1 1:x2 2:y1 3:y2 (push_var only)
    double value = 0.0;    ///< push_const only
  };

 private:
  friend class ExpressionParser;

  std::string source_;
  std::vector<Instruction> code_;
  VariableUsage usage_;
  std::size_t stack_depth_ = 0;
  bool constant_ = false;
  double value_ = 0.0;

  void finalize();
};

}  // namespace fraclab
