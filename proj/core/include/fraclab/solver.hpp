#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fraclab/exponents.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

/// Data of the nonlocal Neumann functional: Gagliardo energy plus a bulk
/// |u|^pbar / pbar term minus the boundary load pairing with g.
struct EnergyProblem {
  Domain domain;
  ExponentField p;  ///< symmetric pair field
  ExponentField s;
  GridFunction g;   ///< only boundary values are used
  ExponentField r;  ///< integrability of g on the boundary
};

/// Checks p symmetry and p*(x) > r/(r - 1) at boundary samples where
/// n - s pbar > 0. Returns the problem with validated fields.
EnergyProblem validate_problem(EnergyProblem problem, int refinement = 2);

/// Discretized G over the interior cell values. Facet values of u are the
/// values of the adjacent cells, so G depends on cell values only.
///
/// Pair data is cached per ordered pair (i, j) with the symmetrized kernel
/// K_ij = w_ij (|x_i - x_j|^-(n + s_ij p_ij) + |x_i - x_j|^-(n + s_ji p_ij)),
/// so each row holds everything needed for its gradient entry and
///
///     G(u) = 1/2 sum_i sum_{j != i} K_ij |u_i - u_j|^p_ij / p_ij + bulk - load.
class EnergyModel {
 public:
  explicit EnergyModel(const EnergyProblem& problem);

  std::size_t size() const { return cells_; }
  double energy(std::span<const double> u) const;
  void gradient(std::span<const double> u, std::span<double> out) const;
  /// G(u + step d) - G(u), computed term by term without cancellation.
  double energy_change(std::span<const double> u, std::span<const double> d,
                       double step) const;
  /// Sum_e |e| g_e u(e) as a load vector on cells.
  std::span<const double> load() const { return load_; }
  /// max_k |grad_k| / |c_k|: the gradient as a density against cell measure.
  double residual(std::span<const double> grad) const;
  /// K_ij for j = neighbor(i, slot).
  double kernel(std::size_t i, std::size_t slot) const { return kernel_[offset(i) + slot]; }
  std::size_t neighbor(std::size_t i, std::size_t slot) const {
    return slot < i ? slot : slot + 1;
  }

 private:
  std::size_t offset(std::size_t i) const { return i * (cells_ - 1); }
  double pair_exponent(std::size_t i, std::size_t slot) const {
    return pair_p_.empty() ? p_const_ : pair_p_[offset(i) + slot];
  }

  std::size_t cells_;
  std::vector<double> kernel_;  // (cells - 1) entries per row, j != i in order
  std::vector<double> pair_p_;  // empty when p is constant
  double p_const_ = 0.0;
  std::vector<double> measure_;
  std::vector<double> pbar_;
  std::vector<double> load_;
};

double energy(const GridFunction& u, const EnergyProblem& problem);
GridFunction gradient(const GridFunction& u, const EnergyProblem& problem);
/// Sup-norm of the discrete gradient divided by cell measure. For p = 2 the
/// mass-normalized Hessian is I plus a diagonally dominant Laplacian, so
/// the sup-norm distance to the minimizer is at most this residual.
double el_residual(const GridFunction& u, const EnergyProblem& problem);

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 42;
  bool accelerate = false;  ///< L-BFGS directions instead of gradient steps
};

enum class SolverStatus { converged, nonconverged, line_search_failure };
const char* to_string(SolverStatus status);

struct IterationRecord {
  int iteration;
  double energy;
  double gradient_norm;
};

struct SolverReport {
  GridFunction minimizer;
  double energy;
  double el_residual;
  int iterations;
  std::vector<IterationRecord> history;
  SolverStatus status;
};

/// Deterministic start in [-1, 1]^cells drawn from `seed`.
GridFunction random_start(const Domain& domain, std::uint64_t seed);

/// Descent with Armijo backtracking from `start` (zero when absent) until
/// the residual is at most `tol`.
SolverReport minimize(const EnergyProblem& problem, const SolverOptions& options = {},
                      const std::optional<GridFunction>& start = std::nullopt);
SolverReport minimize(const EnergyModel& model, const Domain& domain,
                      const SolverOptions& options, std::vector<double> start);

struct CoercivityRow {
  double tau;
  double energy;
  double ratio;  ///< G(tau u) / ||tau u||_{s,p}
};

struct CoercivityReport {
  std::vector<CoercivityRow> rows;
  std::optional<bool> increasing;  ///< absent for a single scale
};

CoercivityReport coercivity_probe(const GridFunction& u, const EnergyProblem& problem,
                                  const std::vector<double>& scales);

}  // namespace fraclab
