#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <cstdio>
#include <random>

#include "fraclab/error.hpp"
#include "fraclab/modular.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

namespace {

constexpr double kArmijo = 0.5;
constexpr double kShrink = 0.5;
constexpr int kMaxBacktracks = 80;
constexpr std::size_t kMemory = 10;

// |a|^p
double abs_pow(double a, double p) {
  if (p == 2.0) return a * a;
  return std::pow(std::abs(a), p);
}

// |a|^(p-2) a, zero at a = 0
double signed_pow(double a, double p) {
  if (a == 0.0) return 0.0;
  if (p == 2.0) return a;
  return std::copysign(std::pow(std::abs(a), p - 1.0), a);
}

// |a + h|^p - |a|^p without cancellation when a + h keeps the sign of a.
double pow_change(double a, double h, double p) {
  if (h == 0.0) return 0.0;
  if (p == 2.0) return h * (2.0 * a + h);
  const double b = a + h;
  if (a == 0.0) return abs_pow(b, p);
  if ((a > 0.0) == (b > 0.0) && b != 0.0)
    return abs_pow(a, p) * std::expm1(p * std::log1p(h / a));
  return abs_pow(b, p) - abs_pow(a, p);
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

EnergyProblem validate_problem(EnergyProblem problem, int refinement) {
  const Domain& domain = problem.domain;
  if (!problem.g.domain().same_mesh(domain))
    throw ValidationError("boundary data g lives on a different mesh");
  if (problem.p.arity() != Arity::pair) throw ValidationError("p must be a pair field");
  if (problem.r.arity() == Arity::pair) throw ValidationError("r must be a boundary field");
  problem.p = validate_bounds(problem.p, domain, Role::exponent, refinement);
  if (!problem.p.symmetric()) throw ValidationError("p must satisfy p(x, y) = p(y, x)");
  problem.s = validate_bounds(problem.s, domain, Role::smoothness, refinement);
  problem.r = validate_bounds(problem.r, domain, Role::exponent, refinement);

  const int n = domain.dimension();
  for (const Point& x : boundary_samples(domain, refinement)) {
    const ExtendedReal crit = critical_trace_exponent(problem.p, problem.s, n, x);
    if (crit.is_infinite()) continue;
    const double rv = problem.r(x);
    const double conjugate = rv / (rv - 1.0);
    if (!(crit.value() > conjugate)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "critical trace exponent %.6g does not exceed r/(r-1) = %.6g at (%.6g, %.6g)",
                    crit.value(), conjugate, x[0], x[1]);
      throw ValidationError(buf);
    }
  }
  return problem;
}

EnergyModel::EnergyModel(const EnergyProblem& problem) : cells_(problem.domain.cells().size()) {
  const Domain& domain = problem.domain;
  const auto cells = domain.cells();
  const double n = domain.dimension();
  const std::size_t row = cells_ - 1;
  kernel_.assign(cells_ * row, 0.0);
  const bool constant_p = problem.p.is_constant();
  if (constant_p) {
    p_const_ = problem.p.constant_value();
  } else {
    pair_p_.assign(cells_ * row, 0.0);
  }
  const bool constant_s = problem.s.is_constant();
  const double min_d = 1e-15 * domain.diameter();

  const std::size_t blocks = (cells_ + kRowsPerBlock - 1) / kRowsPerBlock;
  run_blocks(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(cells_, (b + 1) * kRowsPerBlock);
    for (std::size_t i = b * kRowsPerBlock; i < end; ++i) {
      const Point& xi = cells[i].centroid;
      for (std::size_t slot = 0; slot < row; ++slot) {
        const std::size_t j = slot < i ? slot : slot + 1;
        const Point& xj = cells[j].centroid;
        const double d = std::hypot(xi[0] - xj[0], xi[1] - xj[1]);
        if (d < min_d) throw NumericError("corrupt mesh: coincident centroids");
        const double pv = constant_p ? p_const_ : problem.p(xi, xj);
        const double w = cells[i].measure * cells[j].measure;
        double k;
        if (constant_s) {
          k = 2.0 * w * std::pow(d, -(n + problem.s.constant_value() * pv));
        } else {
          k = w * (std::pow(d, -(n + problem.s(xi, xj) * pv)) +
                   std::pow(d, -(n + problem.s(xj, xi) * pv)));
        }
        kernel_[i * row + slot] = k;
        if (!constant_p) pair_p_[i * row + slot] = pv;
      }
    }
  });

  measure_.reserve(cells_);
  pbar_.reserve(cells_);
  for (const Cell& c : cells) {
    measure_.push_back(c.measure);
    pbar_.push_back(problem.p(c.centroid, c.centroid));
  }
  load_.assign(cells_, 0.0);
  const auto gb = problem.g.boundary();
  const auto facets = domain.facets();
  for (std::size_t e = 0; e < facets.size(); ++e)
    load_[facets[e].cell] += facets[e].measure * gb[e];
}

double EnergyModel::energy(std::span<const double> u) const {
  const std::size_t row = cells_ - 1;
  const double pairs = reduce_rows(
      cells_, 0.0,
      [&](std::size_t i, double& acc) {
        for (std::size_t slot = 0; slot < row; ++slot) {
          const double a = u[i] - u[neighbor(i, slot)];
          if (a == 0.0) continue;
          const double p = pair_exponent(i, slot);
          acc += kernel_[i * row + slot] * abs_pow(a, p) / p;
        }
      },
      [](double& total, double part) { total += part; });
  double bulk = 0.0;
  double pairing = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) {
    if (u[k] != 0.0) bulk += measure_[k] * abs_pow(u[k], pbar_[k]) / pbar_[k];
    pairing += load_[k] * u[k];
  }
  return 0.5 * pairs + bulk - pairing;
}

void EnergyModel::gradient(std::span<const double> u, std::span<double> out) const {
  const std::size_t row = cells_ - 1;
  const std::size_t blocks = (cells_ + kRowsPerBlock - 1) / kRowsPerBlock;
  run_blocks(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(cells_, (b + 1) * kRowsPerBlock);
    for (std::size_t i = b * kRowsPerBlock; i < end; ++i) {
      double acc = 0.0;
      for (std::size_t slot = 0; slot < row; ++slot) {
        const double a = u[i] - u[neighbor(i, slot)];
        if (a == 0.0) continue;
        acc += kernel_[i * row + slot] * signed_pow(a, pair_exponent(i, slot));
      }
      out[i] = acc + measure_[i] * signed_pow(u[i], pbar_[i]) - load_[i];
    }
  });
}

double EnergyModel::energy_change(std::span<const double> u, std::span<const double> d,
                                  double step) const {
  const std::size_t row = cells_ - 1;
  const double pairs = reduce_rows(
      cells_, 0.0,
      [&](std::size_t i, double& acc) {
        for (std::size_t slot = 0; slot < row; ++slot) {
          const std::size_t j = neighbor(i, slot);
          const double h = step * (d[i] - d[j]);
          if (h == 0.0) continue;
          const double p = pair_exponent(i, slot);
          acc += kernel_[i * row + slot] * pow_change(u[i] - u[j], h, p) / p;
        }
      },
      [](double& total, double part) { total += part; });
  double bulk = 0.0;
  double pairing = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) {
    bulk += measure_[k] * pow_change(u[k], step * d[k], pbar_[k]) / pbar_[k];
    pairing += load_[k] * d[k];
  }
  return 0.5 * pairs + bulk - step * pairing;
}

double EnergyModel::residual(std::span<const double> grad) const {
  double m = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) m = std::max(m, std::abs(grad[k]) / measure_[k]);
  return m;
}

double energy(const GridFunction& u, const EnergyProblem& problem) {
  return EnergyModel(problem).energy(u.interior());
}

GridFunction gradient(const GridFunction& u, const EnergyProblem& problem) {
  const EnergyModel model(problem);
  std::vector<double> g(model.size());
  model.gradient(u.interior(), g);
  return GridFunction::from_cells(problem.domain, std::move(g));
}

double el_residual(const GridFunction& u, const EnergyProblem& problem) {
  const EnergyModel model(problem);
  std::vector<double> g(model.size());
  model.gradient(u.interior(), g);
  return model.residual(g);
}

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::nonconverged: return "nonconverged";
    case SolverStatus::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

GridFunction random_start(const Domain& domain, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> u(domain.cells().size());
  for (double& v : u) v = 2.0 * std::ldexp(static_cast<double>(engine() >> 11), -53) - 1.0;
  return GridFunction::from_cells(domain, std::move(u));
}

SolverReport minimize(const EnergyModel& model, const Domain& domain,
                      const SolverOptions& options, std::vector<double> u) {
  if (!(options.tol > 0.0)) throw ValidationError("solver tol must be positive");
  if (options.max_iter < 0) throw ValidationError("solver max_iter must be nonnegative");
  const std::size_t m = model.size();
  if (u.size() != m) throw ValidationError("start vector has the wrong size");
  const double tol = options.tol;

  std::vector<double> g(m), g_new(m), d(m);
  model.gradient(u, g);
  double e = model.energy(u);
  double gnorm = model.residual(g);

  SolverReport report{GridFunction::zero(domain), 0.0, 0.0, 0, {}, SolverStatus::nonconverged};
  report.history.push_back({0, e, gnorm});

  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;  // (s, y)
  const double g_sup = sup_norm(g);
  double bb_step = g_sup > 0.0 ? 1.0 / g_sup : 1.0;
  int it = 0;
  while (true) {
    if (gnorm <= tol) {
      report.status = SolverStatus::converged;
      break;
    }
    if (it >= options.max_iter) {
      report.status = SolverStatus::nonconverged;
      break;
    }
    ++it;

    double step = bb_step;
    if (options.accelerate && !memory.empty()) {
      // two-loop recursion
      std::vector<double> q(g);
      std::vector<double> alpha(memory.size());
      for (std::size_t k = memory.size(); k-- > 0;) {
        const auto& [s, y] = memory[k];
        alpha[k] = dot(s, q) / dot(y, s);
        for (std::size_t c = 0; c < m; ++c) q[c] -= alpha[k] * y[c];
      }
      const auto& [s_last, y_last] = memory.back();
      const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
      for (double& v : q) v *= gamma;
      for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& [s, y] = memory[k];
        const double beta = dot(y, q) / dot(y, s);
        for (std::size_t c = 0; c < m; ++c) q[c] += (alpha[k] - beta) * s[c];
      }
      for (std::size_t c = 0; c < m; ++c) d[c] = -q[c];
      step = 1.0;
      if (!(dot(d, g) < 0.0)) {
        memory.clear();
        for (std::size_t c = 0; c < m; ++c) d[c] = -g[c];
        step = bb_step;
      }
    } else {
      for (std::size_t c = 0; c < m; ++c) d[c] = -g[c];
    }

    const double slope = dot(g, d);
    double change = 0.0;
    bool accepted = false;
    for (int b = 0; b <= kMaxBacktracks; ++b) {
      change = model.energy_change(u, d, step);
      if (change <= kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= kShrink;
    }
    if (!accepted) {
      report.status = SolverStatus::line_search_failure;
      --it;
      break;
    }

    std::vector<double> s(m), y(m);
    for (std::size_t c = 0; c < m; ++c) {
      s[c] = step * d[c];
      u[c] += s[c];
    }
    model.gradient(u, g_new);
    for (std::size_t c = 0; c < m; ++c) y[c] = g_new[c] - g[c];
    g.swap(g_new);
    e += change;
    gnorm = model.residual(g);
    report.history.push_back({it, e, gnorm});

    const double sy = dot(s, y);
    if (sy > 0.0) {
      bb_step = dot(s, s) / sy;
      if (options.accelerate) {
        memory.emplace_back(std::move(s), std::move(y));
        if (memory.size() > kMemory) memory.pop_front();
      }
    }
  }

  report.iterations = it;
  report.energy = model.energy(u);
  report.el_residual = gnorm;
  report.minimizer = GridFunction::from_cells(domain, std::move(u));
  return report;
}

SolverReport minimize(const EnergyProblem& problem, const SolverOptions& options,
                      const std::optional<GridFunction>& start) {
  const EnergyModel model(problem);
  std::vector<double> u(model.size(), 0.0);
  if (start) {
    if (!start->domain().same_mesh(problem.domain))
      throw ValidationError("start lives on a different mesh");
    u.assign(start->interior().begin(), start->interior().end());
  }
  return minimize(model, problem.domain, options, std::move(u));
}

CoercivityReport coercivity_probe(const GridFunction& u, const EnergyProblem& problem,
                                  const std::vector<double>& scales) {
  if (scales.empty()) throw ValidationError("coercivity probe needs at least one scale");
  bool nonzero = false;
  for (double v : u.interior()) nonzero = nonzero || v != 0.0;
  if (!nonzero) throw ValidationError("coercivity probe needs a nonzero direction");

  const EnergyModel model(problem);
  const PairQuadrature pq(problem.domain, Scope::interior);
  CoercivityReport out;
  for (double tau : scales) {
    if (!(tau > 0.0)) throw ValidationError("coercivity scales must be positive");
    const GridFunction v = GridFunction::from_cells(
        problem.domain, std::vector<double>(u.interior().begin(), u.interior().end()))
                               .scaled(tau);
    const double g = model.energy(v.interior());
    const double norm = full_norm(v, problem.p, problem.s, pq);
    out.rows.push_back({tau, g, g / norm});
  }
  if (out.rows.size() >= 2) {
    bool up = true;
    for (std::size_t k = 1; k < out.rows.size(); ++k)
      if (!(out.rows[k].ratio > out.rows[k - 1].ratio)) up = false;
    out.increasing = up;
  }
  return out;
}

}  // namespace fraclab
