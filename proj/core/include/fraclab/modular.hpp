#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "fraclab/exponents.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

enum class LuxemburgStatus { converged, zero_function, bracket_failure };

const char* to_string(LuxemburgStatus status);

struct LuxemburgResult {
  double lambda_star = 0.0;
  double modular_at_lambda = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  LuxemburgStatus status = LuxemburgStatus::zero_function;
};

/// A discrete modular in the form
///
///     rho(lambda) = sum_g c_g * (scale / lambda)^(e_g),
///
/// where terms with the same exponent have been merged. `scale` is the
/// largest magnitude in the data, so all c_g are O(measure) and evaluating
/// far from lambda = scale cannot overflow the coefficients.
class Modular {
 public:
  struct Term {
    double exponent;
    double coefficient;
  };

  Modular() = default;
  Modular(double scale, std::vector<Term> terms);

  double operator()(double lambda) const;
  double scale() const { return scale_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return scale_ == 0.0 || terms_.empty(); }

 private:
  double scale_ = 0.0;
  std::vector<Term> terms_;  // sorted by exponent
};

/// Accumulates c_g per distinct exponent. Merging is order-sensitive only
/// through floating-point addition within each exponent group.
class ModularBuilder {
 public:
  explicit ModularBuilder(double scale = 0.0) : scale_(scale) {}

  /// Add weight * (magnitude / scale)^exponent to the group of `exponent`.
  void add(double magnitude, double weight, double exponent);
  /// Add an already normalized coefficient.
  void accumulate(double exponent, double coefficient);
  void merge(const ModularBuilder& other);
  Modular build() const;

  /// Builder for explicit samples; the scale is max |value|.
  static Modular from_samples(std::span<const double> values, std::span<const double> weights,
                              std::span<const double> exponents);

 private:
  double scale_;
  std::vector<double> exponents_;
  std::vector<double> sums_;
  std::unordered_map<double, std::size_t> index_;
  std::size_t last_ = 0;
};

/// Root of rho(lambda) = 1 by bracket expansion from lambda = scale and
/// bisection to relative width 1e-12 (at most 200 steps each way).
LuxemburgResult solve_luxemburg(const Modular& modular);

/// sum_k w_k (|f_k| / lambda)^(p(x_k)) over cells or facets.
double modular_lebesgue(const GridFunction& f, const ExponentField& p, Scope scope,
                        double lambda);
LuxemburgResult luxemburg_norm(const GridFunction& f, const ExponentField& p, Scope scope);

/// sum over pairs of w_ij |f_i - f_j|^p_ij / (lambda^p_ij |x_i - x_j|^(n + s_ij p_ij)).
double modular_gagliardo(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                         const PairQuadrature& pq, double lambda);
/// The Gagliardo modular of `f` restricted to `pq`, compiled for root-finding.
Modular compile_gagliardo(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                          const PairQuadrature& pq);
LuxemburgResult gagliardo_seminorm(const GridFunction& f, const ExponentField& p,
                                   const ExponentField& s, const PairQuadrature& pq);
/// Gagliardo seminorm of the trace over boundary x boundary, kernel order t.
LuxemburgResult boundary_gagliardo_seminorm(const GridFunction& f, const ExponentField& q,
                                            const ExponentField& t, const PairQuadrature& pq);

/// ||f||_{L^pbar} + [f]_{s,p} with pbar(x) = p(x, x).
double full_norm(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                 const PairQuadrature& pq);

/// Values of a univariate (or diagonal of a pair) field at cell or facet centroids.
std::vector<double> sample_field(const ExponentField& field, const Domain& domain, Scope scope);

}  // namespace fraclab
