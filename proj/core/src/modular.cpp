#include "fraclab/modular.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

namespace {

constexpr int kMaxBracketSteps = 200;
constexpr int kMaxBisections = 200;
constexpr double kRelativeWidth = 1e-12;
constexpr double kOverflowRatio = 1e100;

// (ratio)^e with the log-domain form for very large ratios.
double guarded_pow(double ratio, double e) {
  if (ratio > kOverflowRatio) return std::exp(e * std::log(ratio));
  if (e == 2.0) return ratio * ratio;
  return std::pow(ratio, e);
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("lambda must be positive and finite");
}

void check_scope(const PairQuadrature& pq, Scope scope, const char* what) {
  if (pq.scope() != scope)
    throw ValidationError(std::string(what) + ": pair quadrature has the wrong scope");
}

}  // namespace

const char* to_string(LuxemburgStatus status) {
  switch (status) {
    case LuxemburgStatus::converged: return "converged";
    case LuxemburgStatus::zero_function: return "zero-function";
    case LuxemburgStatus::bracket_failure: return "bracket-failure";
  }
  return "unknown";
}

Modular::Modular(double scale, std::vector<Term> terms) : scale_(scale), terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
}

double Modular::operator()(double lambda) const {
  if (is_zero()) return 0.0;
  const double log_ratio = std::log(scale_ / lambda);
  double sum = 0.0;
  for (const Term& t : terms_) sum += t.coefficient * std::exp(t.exponent * log_ratio);
  return sum;
}

void ModularBuilder::add(double magnitude, double weight, double exponent) {
  if (magnitude == 0.0 || weight == 0.0) return;
  accumulate(exponent, weight * guarded_pow(magnitude / scale_, exponent));
}

void ModularBuilder::accumulate(double exponent, double coefficient) {
  if (last_ < exponents_.size() && exponents_[last_] == exponent) {
    sums_[last_] += coefficient;
    return;
  }
  const auto [it, inserted] = index_.try_emplace(exponent, exponents_.size());
  if (inserted) {
    exponents_.push_back(exponent);
    sums_.push_back(0.0);
  }
  last_ = it->second;
  sums_[last_] += coefficient;
}

void ModularBuilder::merge(const ModularBuilder& other) {
  for (std::size_t k = 0; k < other.exponents_.size(); ++k)
    accumulate(other.exponents_[k], other.sums_[k]);
}

Modular ModularBuilder::build() const {
  std::vector<Modular::Term> terms;
  terms.reserve(exponents_.size());
  for (std::size_t k = 0; k < exponents_.size(); ++k)
    if (sums_[k] != 0.0) terms.push_back({exponents_[k], sums_[k]});
  return Modular(scale_, std::move(terms));
}

Modular ModularBuilder::from_samples(std::span<const double> values,
                                     std::span<const double> weights,
                                     std::span<const double> exponents) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  ModularBuilder b(scale);
  if (scale == 0.0) return b.build();
  for (std::size_t k = 0; k < values.size(); ++k)
    b.add(std::abs(values[k]), weights[k], exponents[k]);
  return b.build();
}

LuxemburgResult solve_luxemburg(const Modular& modular) {
  LuxemburgResult r;
  if (modular.is_zero()) {
    r.status = LuxemburgStatus::zero_function;
    return r;
  }
  const double scale = modular.scale();
  double lo = scale;
  double hi = scale;
  int steps = 0;
  if (modular(scale) > 1.0) {
    while (modular(hi) > 1.0) {
      if (++steps > kMaxBracketSteps || !std::isfinite(hi)) {
        r.status = LuxemburgStatus::bracket_failure;
        r.bracket_lo = lo;
        r.bracket_hi = hi;
        r.iterations = steps;
        return r;
      }
      lo = hi;
      hi *= 2.0;
    }
  } else {
    while (modular(lo) < 1.0) {
      if (++steps > kMaxBracketSteps || lo == 0.0) {
        r.status = LuxemburgStatus::bracket_failure;
        r.bracket_lo = lo;
        r.bracket_hi = hi;
        r.iterations = steps;
        return r;
      }
      hi = lo;
      lo *= 0.5;
    }
  }
  // modular(lo) >= 1 >= modular(hi)
  int bisections = 0;
  while (hi - lo > kRelativeWidth * hi && bisections < kMaxBisections) {
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++bisections;
  }
  r.lambda_star = 0.5 * (lo + hi);
  r.modular_at_lambda = modular(r.lambda_star);
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.iterations = steps + bisections;
  r.status = LuxemburgStatus::converged;
  return r;
}

std::vector<double> sample_field(const ExponentField& field, const Domain& domain, Scope scope) {
  std::vector<double> out;
  if (scope == Scope::interior) {
    out.reserve(domain.cells().size());
    for (const Cell& c : domain.cells()) out.push_back(field(c.centroid));
  } else {
    out.reserve(domain.facets().size());
    for (const Facet& e : domain.facets()) out.push_back(field(e.centroid));
  }
  return out;
}

namespace {

std::vector<double> measures(const Domain& domain, Scope scope) {
  std::vector<double> w;
  if (scope == Scope::interior) {
    for (const Cell& c : domain.cells()) w.push_back(c.measure);
  } else {
    for (const Facet& e : domain.facets()) w.push_back(e.measure);
  }
  return w;
}

}  // namespace

double modular_lebesgue(const GridFunction& f, const ExponentField& p, Scope scope,
                        double lambda) {
  check_lambda(lambda);
  const auto values = f.values(scope);
  const auto exps = sample_field(p, f.domain(), scope);
  const auto w = measures(f.domain(), scope);
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double a = std::abs(values[k]);
    if (a == 0.0) continue;
    sum += w[k] * guarded_pow(a / lambda, exps[k]);
  }
  return sum;
}

LuxemburgResult luxemburg_norm(const GridFunction& f, const ExponentField& p, Scope scope) {
  const auto values = f.values(scope);
  const auto exps = sample_field(p, f.domain(), scope);
  const auto w = measures(f.domain(), scope);
  return solve_luxemburg(ModularBuilder::from_samples(values, w, exps));
}

double modular_gagliardo(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                         const PairQuadrature& pq, double lambda) {
  check_lambda(lambda);
  const std::vector<double> v = pq.gather(f);
  const double n = pq.dimension();
  return reduce_rows(
      pq.points(), 0.0,
      [&](std::size_t i, double& acc) {
        const Point& xi = pq.point(i);
        for (std::size_t j = 0; j < pq.points(); ++j) {
          if (j == i) continue;
          const double diff = std::abs(v[i] - v[j]);
          if (diff == 0.0) continue;
          const double d = pq.distance(i, j);
          if (d < pq.min_distance()) throw NumericError("corrupt mesh: coincident centroids");
          const Point& xj = pq.point(j);
          const double pv = p(xi, xj);
          const double sv = s(xi, xj);
          acc += pq.weight(i, j) * guarded_pow(diff / lambda, pv) * std::pow(d, -(n + sv * pv));
        }
      },
      [](double& total, double part) { total += part; });
}

Modular compile_gagliardo(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                          const PairQuadrature& pq) {
  const std::vector<double> v = pq.gather(f);
  double scale = 0.0;
  if (!v.empty()) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    scale = *mx - *mn;
  }
  if (scale == 0.0) return Modular();

  const double n = pq.dimension();
  const bool frozen = p.is_constant() && s.is_constant();
  const double p0 = frozen ? p.constant_value() : 0.0;
  const double half_kernel = frozen ? -0.5 * (n + s.constant_value() * p0) : 0.0;
  const double min_d2 = pq.min_distance() * pq.min_distance();

  ModularBuilder total = reduce_rows(
      pq.points(), ModularBuilder(scale),
      [&](std::size_t i, ModularBuilder& acc) {
        const Point& xi = pq.point(i);
        const double wi = pq.measure(i);
        double row = 0.0;
        for (std::size_t j = 0; j < pq.points(); ++j) {
          if (j == i) continue;
          const double diff = std::abs(v[i] - v[j]);
          if (diff == 0.0) continue;
          const Point& xj = pq.point(j);
          const double dx = xi[0] - xj[0];
          const double dy = xi[1] - xj[1];
          const double d2 = dx * dx + dy * dy;
          if (d2 < min_d2) throw NumericError("corrupt mesh: coincident centroids");
          if (frozen) {
            row += pq.measure(j) * guarded_pow(diff / scale, p0) * std::pow(d2, half_kernel);
          } else {
            const double pv = p(xi, xj);
            const double sv = s(xi, xj);
            acc.accumulate(pv, wi * pq.measure(j) * guarded_pow(diff / scale, pv) *
                                   std::pow(d2, -0.5 * (n + sv * pv)));
          }
        }
        if (frozen && row != 0.0) acc.accumulate(p0, wi * row);
      },
      [](ModularBuilder& out, const ModularBuilder& part) { out.merge(part); });
  return total.build();
}

LuxemburgResult gagliardo_seminorm(const GridFunction& f, const ExponentField& p,
                                   const ExponentField& s, const PairQuadrature& pq) {
  return solve_luxemburg(compile_gagliardo(f, p, s, pq));
}

LuxemburgResult boundary_gagliardo_seminorm(const GridFunction& f, const ExponentField& q,
                                            const ExponentField& t, const PairQuadrature& pq) {
  check_scope(pq, Scope::boundary, "boundary seminorm");
  return solve_luxemburg(compile_gagliardo(f, q, t, pq));
}

double full_norm(const GridFunction& f, const ExponentField& p, const ExponentField& s,
                 const PairQuadrature& pq) {
  check_scope(pq, Scope::interior, "full norm");
  const LuxemburgResult lebesgue = luxemburg_norm(f, p.diagonal(), Scope::interior);
  const LuxemburgResult semi = gagliardo_seminorm(f, p, s, pq);
  if (lebesgue.status == LuxemburgStatus::bracket_failure ||
      semi.status == LuxemburgStatus::bracket_failure)
    throw NumericError("Luxemburg bracket failure in full norm");
  return lebesgue.lambda_star + semi.lambda_star;
}

}  // namespace fraclab
