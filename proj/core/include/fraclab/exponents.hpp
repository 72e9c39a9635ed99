#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraclab/expression.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

/// Where a field lives.
enum class Arity {
  domain,    ///< f(x), x in the closed domain
  pair,      ///< p(x, y) on domain x domain
  boundary,  ///< q(x), x on the boundary
};

/// What a field is used for; selects the admissible value range.
enum class Role {
  exponent,       ///< p, q, r: 1 < inf <= sup < inf
  smoothness,     ///< s, t:    0 < inf <= sup < 1
  holder_target,  ///< r in Hoelder's inequality: 1 <= inf <= sup < inf
  data,           ///< f, g: finite values only
};

struct Bounds {
  double inf;
  double sup;
};

class ExponentField;
using FieldTable = std::map<std::string, ExponentField, std::less<>>;

/// A scalar field given by an expression, with optionally cached bounds.
class ExponentField {
 public:
  /// Parse `source` for the given arity. Univariate entries of `references`
  /// may be called as `name(x)` / `name(y)`, pair entries as `name(x, y)`.
  static ExponentField parse(std::string_view source, Arity arity,
                             const FieldTable& references = {});
  static ExponentField constant(double value, Arity arity);

  /// Univariate evaluation. For pair fields this is the diagonal p(x, x).
  double operator()(const Point& x) const noexcept { return expr_(x, x); }
  /// Pair evaluation. Univariate fields ignore `y`.
  double operator()(const Point& x, const Point& y) const noexcept { return expr_(x, y); }

  Arity arity() const noexcept { return arity_; }
  bool is_constant() const noexcept { return expr_.is_constant(); }
  double constant_value() const noexcept { return expr_.constant_value(); }
  const std::string& source() const noexcept { return expr_.source(); }
  const Expression& expression() const noexcept { return expr_; }

  /// True when known to satisfy p(x, y) == p(y, x) exactly: constants,
  /// symmetric extensions, and pair fields that passed sampled checking.
  bool symmetric() const noexcept { return symmetric_; }
  const std::optional<Bounds>& bounds() const noexcept { return bounds_; }

  /// The univariate field x -> p(x, x).
  ExponentField diagonal() const;
  /// The pair field (x, y) -> p(y, x).
  ExponentField transposed() const;

 private:
  friend ExponentField symmetric_extension(const ExponentField& p);
  friend ExponentField validate_bounds(ExponentField field, const Domain& domain, Role role,
                                       int refinement);

  ExponentField(Expression expr, Arity arity) : expr_(std::move(expr)), arity_(arity) {}

  Expression expr_;
  Arity arity_;
  bool symmetric_ = false;
  std::optional<Bounds> bounds_;
};

/// (x, y) -> (p(x) + p(y)) / 2 for a univariate p; its diagonal is p.
ExponentField symmetric_extension(const ExponentField& p);

/// Sample `field` on the mesh (cell and facet centroids, plus sub-cell and
/// sub-facet centroids at `refinement` per axis for univariate fields; all
/// centroid pairs for pair fields), check the role's admissible range, and
/// return the field with its sampled inf/sup cached. Pair fields also get
/// their symmetric flag from the sampled check.
///
/// Throws ValidationError naming the offending sample on a violation.
ExponentField validate_bounds(ExponentField field, const Domain& domain, Role role,
                              int refinement = 2);

/// A real number or +infinity. Used for the critical trace exponent,
/// which is infinite when n - s p <= 0.
class ExtendedReal {
 public:
  constexpr explicit ExtendedReal(double v) : value_(v), infinite_(false) {}
  static constexpr ExtendedReal infinity() { return ExtendedReal(); }

  constexpr bool is_infinite() const { return infinite_; }
  /// Throws std::logic_error when infinite.
  double value() const;
  /// For reports: the value, or +inf as a double.
  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  ExtendedReal minus(double x) const { return infinite_ ? *this : ExtendedReal(value_ - x); }
  /// a >= x for a finite x.
  bool at_least(double x) const { return infinite_ || value_ >= x; }

 private:
  constexpr ExtendedReal() : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

/// (n - 1) p / (n - s p) when n - s p > 0, else +infinity.
ExtendedReal critical_trace_exponent(double p, double s, int n);
/// Same with p = p(x, x) and s = s(x, x) read from the fields at x.
ExtendedReal critical_trace_exponent(const ExponentField& p, const ExponentField& s, int n,
                                     const Point& x);

/// Boundary sample points: facet centroids, and in 2D `refinement`
/// sub-facet centroids per facet.
std::vector<Point> boundary_samples(const Domain& domain, int refinement);

struct GapResult {
  /// min over boundary samples of p*(x) - q(x); infinite when p* is
  /// infinite at every sample.
  ExtendedReal gap;
  bool subcritical;  ///< gap > 0
  Point witness;     ///< sample attaining the minimum
  ExtendedReal critical_at_witness;
  double q_at_witness;
};

/// Uniform margin between the critical trace exponent and q on the boundary.
GapResult subcritical_gap(const ExponentField& p, const ExponentField& q,
                          const ExponentField& s, const Domain& domain, int refinement = 2);

struct Patch {
  Box box;
  std::vector<std::size_t> cells;   ///< cells with centroid in the box
  std::vector<std::size_t> facets;  ///< facets with centroid in the box
  double diameter;                  ///< over the patch samples, < epsilon
  double p_inf;                     ///< sampled inf of p over patch pairs
  double p_frozen;
  double s_frozen;
  double t_aux;  ///< auxiliary smoothness order, 0 < t < s_frozen
  bool condition_12;  ///< p*(p(z,y), s(z,y)) - q(x) >= k/2 on the patch
  bool condition_13;  ///< p*(p_frozen, s_frozen) >= k/3 + q(x) on the patch
  /// 1 < s_frozen p_frozen < n, the regime of the constant-exponent trace
  /// theorem. Reported, not required.
  bool trace_regime;
};

struct GapCertificate {
  double gap_k;
  double epsilon;
  double delta;
  int refinement;
  int delta_retries_used;
  std::vector<Patch> patches;
};

struct CoveringOptions {
  int refinement = 2;
  double initial_epsilon = 0.5;
  int epsilon_retries = 8;
  int delta_retries = 6;
};

/// Cover the boundary by overlapping axis-aligned boxes of side eps/sqrt(n)
/// and freeze exponents on each. Epsilon is halved until every patch passes
/// the k/2 check; delta starts at min(0.1, (p_- - 1)/2) and is halved until
/// every patch passes the k/3 check with p_frozen - 1 > delta.
///
/// Throws ValidationError when the configuration is not subcritical or k
/// is out of range, NumericError when the retry budgets run out.
GapCertificate covering_partition(const ExponentField& p, const ExponentField& q,
                                  const ExponentField& s, const Domain& domain, double k,
                                  const CoveringOptions& options = {});

}  // namespace fraclab
