#include "fraclab/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fraclab/error.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

namespace {

constexpr double kConjugacyTolerance = 1e-12;
constexpr double kRootAllowance = 4e-12;

double value_of(const LuxemburgResult& r, const char* what) {
  if (r.status == LuxemburgStatus::bracket_failure)
    throw NumericError(std::string("Luxemburg bracket failure in ") + what);
  return r.lambda_star;
}

bool at_most(double lhs, double rhs) { return lhs <= rhs * (1.0 + kRootAllowance); }

std::vector<double> measures_of(const Domain& domain, Scope scope) {
  std::vector<double> w;
  if (scope == Scope::interior) {
    for (const Cell& c : domain.cells()) w.push_back(c.measure);
  } else {
    for (const Facet& e : domain.facets()) w.push_back(e.measure);
  }
  return w;
}

std::vector<Point> points_of(const Domain& domain, Scope scope) {
  std::vector<Point> pts;
  if (scope == Scope::interior) {
    for (const Cell& c : domain.cells()) pts.push_back(c.centroid);
  } else {
    for (const Facet& e : domain.facets()) pts.push_back(e.centroid);
  }
  return pts;
}

double mollifier(const Point& z, int dimension) {
  const double r2 = z[0] * z[0] + (dimension == 2 ? z[1] * z[1] : 0.0);
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 / (r2 - 1.0));
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

const char* to_string(RatioStatus status) {
  switch (status) {
    case RatioStatus::defined: return "defined";
    case RatioStatus::zero_function_unit: return "zero-function";
    case RatioStatus::undefined: return "undefined";
  }
  return "unknown";
}

Ratio Ratio::of(double num, double den) {
  if (den > 0.0 && std::isfinite(num) && std::isfinite(den))
    return {num / den, RatioStatus::defined};
  if (den == 0.0 && num == 0.0) return {1.0, RatioStatus::zero_function_unit};
  return {0.0, RatioStatus::undefined};
}

GridFunction product(const GridFunction& f, const GridFunction& g) {
  if (!f.domain().same_mesh(g.domain()))
    throw ValidationError("product of grid functions on different meshes");
  std::vector<double> in(f.interior().size());
  std::vector<double> bd(f.boundary().size());
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = f.interior()[k] * g.interior()[k];
  for (std::size_t k = 0; k < bd.size(); ++k) bd[k] = f.boundary()[k] * g.boundary()[k];
  return GridFunction(f.domain(), std::move(in), std::move(bd));
}

HolderReport holder_check(const GridFunction& f, const GridFunction& g, const ExponentField& p,
                          const ExponentField& q, const ExponentField& r, Scope scope) {
  const auto pts = points_of(f.domain(), scope);
  double worst = 0.0;
  Point worst_at{};
  for (const Point& x : pts) {
    const double gap = std::abs(1.0 / r(x) - 1.0 / p(x) - 1.0 / q(x));
    if (!(gap <= worst)) {
      worst = gap;
      worst_at = x;
    }
  }
  if (!(worst <= kConjugacyTolerance)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "conjugacy 1/r = 1/p + 1/q violated by %.3g at (%.6g, %.6g)", worst,
                  worst_at[0], worst_at[1]);
    throw ValidationError(buf);
  }
  HolderReport out{};
  out.worst_conjugacy = worst;
  out.lhs = value_of(luxemburg_norm(product(f, g), r, scope), "Hoelder lhs");
  const double nf = value_of(luxemburg_norm(f, p, scope), "Hoelder rhs");
  const double ng = value_of(luxemburg_norm(g, q, scope), "Hoelder rhs");
  out.rhs_product = nf * ng;
  out.ratio = Ratio::of(out.lhs, out.rhs_product);
  return out;
}

EmbeddingReport embedding_check(const GridFunction& f, const ExponentField& p,
                                const ExponentField& s, double t, double r,
                                const PairQuadrature& pq) {
  if (pq.scope() != Scope::interior)
    throw ValidationError("embedding check needs an interior pair quadrature");
  const double n = pq.dimension();

  struct Acc {
    double kernel = 0.0;
    double p_min = std::numeric_limits<double>::infinity();
    double s_min = std::numeric_limits<double>::infinity();
  };
  const Acc acc = reduce_rows(
      pq.points(), Acc{},
      [&](std::size_t i, Acc& a) {
        const Point& xi = pq.point(i);
        for (std::size_t j = 0; j < pq.points(); ++j) {
          if (j == i) continue;
          const Point& xj = pq.point(j);
          const double pv = p(xi, xj);
          const double sv = s(xi, xj);
          a.p_min = std::min(a.p_min, pv);
          a.s_min = std::min(a.s_min, sv);
          if (pv <= r) continue;  // rejected below
          const double e = (sv - t) * r * pv / (pv - r) - n;
          a.kernel += pq.weight(i, j) * std::pow(pq.distance(i, j), e);
        }
      },
      [](Acc& total, const Acc& part) {
        total.kernel += part.kernel;
        total.p_min = std::min(total.p_min, part.p_min);
        total.s_min = std::min(total.s_min, part.s_min);
      });
  if (!(t > 0.0 && t < acc.s_min))
    throw ValidationError("embedding order t must lie in (0, inf s)");
  if (!(r > 1.0 && r < acc.p_min))
    throw ValidationError("embedding exponent r must lie in (1, inf p)");

  const ExponentField rc = ExponentField::constant(r, Arity::domain);
  const ExponentField rp = ExponentField::constant(r, Arity::pair);
  const ExponentField tp = ExponentField::constant(t, Arity::pair);

  EmbeddingReport out{};
  out.lebesgue_r = value_of(luxemburg_norm(f, rc, Scope::interior), "L^r norm");
  out.lebesgue_bar = value_of(luxemburg_norm(f, p.diagonal(), Scope::interior), "L^pbar norm");
  out.seminorm_tr = value_of(gagliardo_seminorm(f, rp, tp, pq), "[f]_{t,r}");
  out.seminorm_sp = value_of(gagliardo_seminorm(f, p, s, pq), "[f]_{s,p}");
  out.lebesgue_ratio = Ratio::of(out.lebesgue_r, out.lebesgue_bar);
  out.seminorm_ratio = Ratio::of(out.seminorm_tr, out.seminorm_sp);
  out.kernel_bound = acc.kernel;
  return out;
}

TraceReport trace_check(const GridFunction& f, const ExponentField& p, const ExponentField& q,
                        const ExponentField& s, const PairQuadrature& pq, int refinement) {
  TraceReport out;
  const GapResult gap = subcritical_gap(p, q, s, f.domain(), refinement);
  out.subcritical = gap.subcritical;
  if (gap.subcritical) out.gap_k = gap.gap;

  out.boundary_norm = value_of(luxemburg_norm(f, q, Scope::boundary), "boundary norm");
  const double lebesgue =
      value_of(luxemburg_norm(f, p.diagonal(), Scope::interior), "L^pbar norm");
  const double semi = value_of(gagliardo_seminorm(f, p, s, pq), "seminorm");
  out.full_norm = lebesgue + semi;

  if (out.full_norm == 0.0) {
    if (out.boundary_norm != 0.0)
      throw NumericError("mesh inconsistency: zero full norm with a nonzero trace");
    out.ratio = {0.0, RatioStatus::undefined};
  } else {
    out.ratio = Ratio::of(out.boundary_norm, out.full_norm);
  }
  return out;
}

TraceReport trace_check(const GridFunction& f, const ExponentField& p, const ExponentField& q,
                        const ExponentField& s) {
  return trace_check(f, p, q, s, PairQuadrature(f.domain(), Scope::interior));
}

double ConcentrationFamily::operator()(const Point& x, double k, int dimension) const {
  Point z{k * (x[0] - x0[0]) / radius, dimension == 2 ? k * (x[1] - x0[1]) / radius : 0.0};
  const double g = profile ? (*profile)(z) : mollifier(z, dimension);
  return std::pow(k, a) * g;
}

GridFunction ConcentrationFamily::sample(const Domain& domain, double k) const {
  const int n = domain.dimension();
  std::vector<double> in;
  std::vector<double> bd;
  in.reserve(domain.cells().size());
  bd.reserve(domain.facets().size());
  for (const Cell& c : domain.cells()) in.push_back((*this)(c.centroid, k, n));
  for (const Facet& e : domain.facets()) bd.push_back((*this)(e.centroid, k, n));
  return GridFunction(domain, std::move(in), std::move(bd));
}

FamilyCheck check_family(const ConcentrationFamily& family, const ExponentField& p,
                         const ExponentField& q, const ExponentField& s, const Domain& domain) {
  const int n = domain.dimension();
  std::vector<Point> ball;
  for (const Cell& c : domain.cells())
    if (distance(c.centroid, family.x0) <= family.radius) ball.push_back(c.centroid);
  for (const Facet& e : domain.facets())
    if (distance(e.centroid, family.x0) <= family.radius) ball.push_back(e.centroid);

  FamilyCheck out{};
  out.worst_interior = -std::numeric_limits<double>::infinity();
  out.worst_boundary = std::numeric_limits<double>::infinity();
  if (p.is_constant() && s.is_constant()) {
    const double pv = p.constant_value();
    out.worst_interior = family.a * pv + s.constant_value() * pv - n;
  } else {
    for (const Point& y : ball)
      for (const Point& z : ball) {
        const double pv = p(y, z);
        out.worst_interior = std::max(out.worst_interior, family.a * pv + s(y, z) * pv - n);
      }
  }
  for (const Point& x : boundary_samples(domain, 2))
    if (distance(x, family.x0) <= family.radius)
      out.worst_boundary = std::min(out.worst_boundary, family.a * q(x) - (n - 1));
  out.admissible = out.worst_interior <= 0.0 && out.worst_boundary > 0.0;
  return out;
}

SharpnessReport sharpness_sweep(const ConcentrationFamily& family, const ExponentField& p,
                                const ExponentField& q, const ExponentField& s,
                                const Domain& domain) {
  if (family.scales.empty()) throw ValidationError("sharpness sweep needs at least one scale");
  if (!(family.radius > 0.0)) throw ValidationError("concentration radius must be positive");
  SharpnessReport out{};
  out.family = check_family(family, p, q, s, domain);
  const PairQuadrature pq(domain, Scope::interior);

  std::vector<double> ratios;
  for (double k : family.scales) {
    if (!(k >= 1.0)) throw ValidationError("concentration scales must be >= 1");
    SharpnessRow row{};
    row.k = k;
    const GridFunction fk = family.sample(domain, k);
    for (double v : fk.interior())
      if (v != 0.0) ++row.support_cells;
    row.rejected = row.support_cells < 3;
    if (!row.rejected) {
      row.report = trace_check(fk, p, q, s, pq);
      if (row.report.ratio.defined()) ratios.push_back(row.report.ratio.value);
    }
    out.rows.push_back(row);
  }
  out.increasing = ratios.size() >= 2;
  for (std::size_t k = 1; k < ratios.size(); ++k)
    if (!(ratios[k] > ratios[k - 1])) out.increasing = false;
  if (!ratios.empty()) {
    out.growth = ratios.back() / ratios.front();
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    out.spread = *mx / *mn;
  }
  return out;
}

ProofChainReport proof_chain_check(const GridFunction& f, const GapCertificate& certificate,
                                   const ExponentField& p, const ExponentField& q,
                                   const ExponentField& s) {
  const Domain& domain = f.domain();
  const double n = domain.dimension();
  ProofChainReport out{};
  out.domain_seminorm =
      value_of(gagliardo_seminorm(f, p, s, PairQuadrature(domain, Scope::interior)), "seminorm");
  out.domain_lebesgue =
      value_of(luxemburg_norm(f, p.diagonal(), Scope::interior), "L^pbar norm");

  const auto facet_w = measures_of(domain, Scope::boundary);

  for (std::size_t b = 0; b < certificate.patches.size(); ++b) {
    const Patch& patch = certificate.patches[b];
    if (patch.cells.size() < 2) throw ValidationError("patch with fewer than 2 cells");
    PatchChain c{};
    c.patch = b;
    c.p_frozen = patch.p_frozen;
    c.t_aux = patch.t_aux;
    const PairQuadrature pq(domain, Scope::interior, patch.cells);
    const std::vector<double> v = pq.gather(f);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    c.zero_function = *mn == *mx;

    // Lebesgue norm over the patch with the frozen exponent.
    {
      std::vector<double> w, e;
      for (std::size_t i = 0; i < pq.points(); ++i) {
        w.push_back(pq.measure(i));
        e.push_back(patch.p_frozen);
      }
      c.patch_lebesgue = value_of(solve_luxemburg(ModularBuilder::from_samples(v, w, e)),
                                  "patch Lebesgue norm");
      c.lebesgue_ratio = Ratio::of(c.patch_lebesgue, out.domain_lebesgue);
    }

    if (c.zero_function) {
      c.first_ratio = Ratio::of(0.0, 0.0);
      c.first_holds = c.second_holds = c.monotone_holds = true;
      out.patches.push_back(c);
      continue;
    }

    const double pi = patch.p_frozen;
    const double t = patch.t_aux;
    c.frozen_seminorm = value_of(
        gagliardo_seminorm(f, ExponentField::constant(pi, Arity::pair),
                           ExponentField::constant(t, Arity::pair), pq),
        "frozen seminorm");
    c.patch_seminorm = value_of(gagliardo_seminorm(f, p, s, pq), "patch seminorm");

    // F = |f(x) - f(y)| / |x - y|^s under d mu = dx dy / |x - y|^(n + (t - s) p_i),
    // and the constant function 1 in L^b(mu) with 1/p_i = 1/p + 1/b.
    double f_scale = 0.0;
    for (std::size_t i = 0; i < pq.points(); ++i)
      for (std::size_t j = 0; j < pq.points(); ++j) {
        if (j == i) continue;
        const double sv = s(pq.point(i), pq.point(j));
        f_scale = std::max(f_scale, std::abs(v[i] - v[j]) / std::pow(pq.distance(i, j), sv));
      }
    ModularBuilder weighted(f_scale);
    ModularBuilder unit(1.0);
    for (std::size_t i = 0; i < pq.points(); ++i)
      for (std::size_t j = 0; j < pq.points(); ++j) {
        if (j == i) continue;
        const Point& xi = pq.point(i);
        const Point& xj = pq.point(j);
        const double d = pq.distance(i, j);
        const double pv = p(xi, xj);
        const double sv = s(xi, xj);
        const double mu = pq.weight(i, j) * std::pow(d, -(n + (t - sv) * pi));
        weighted.add(std::abs(v[i] - v[j]) / std::pow(d, sv), mu, pv);
        if (!(pv > pi)) throw NumericError("frozen exponent not below p on patch");
        unit.add(1.0, mu, pv * pi / (pv - pi));
      }
    c.weighted_norm = value_of(solve_luxemburg(weighted.build()), "weighted norm");
    c.holder_constant = 2.0 * value_of(solve_luxemburg(unit.build()), "unit norm");

    const double bound = c.holder_constant * c.weighted_norm;
    c.first_ratio = Ratio::of(c.frozen_seminorm, bound);
    c.first_holds = at_most(c.frozen_seminorm, bound);
    c.second_holds = at_most(c.weighted_norm, c.patch_seminorm);
    c.monotone_holds = at_most(c.patch_seminorm, out.domain_seminorm);
    out.violations += !c.first_holds + !c.second_holds + !c.monotone_holds;
    out.patches.push_back(c);
  }

  // Patch-union bound for the boundary norm.
  const auto trace = f.boundary();
  const auto q_at = sample_field(q, domain, Scope::boundary);
  out.union_lhs = value_of(luxemburg_norm(f, q, Scope::boundary), "boundary norm");
  out.union_rhs = 0.0;
  for (const Patch& patch : certificate.patches) {
    std::vector<double> v, w, e;
    for (std::size_t k : patch.facets) {
      v.push_back(trace[k]);
      w.push_back(facet_w[k]);
      e.push_back(q_at[k]);
    }
    out.union_rhs += value_of(solve_luxemburg(ModularBuilder::from_samples(v, w, e)),
                              "patch boundary norm");
  }
  out.union_holds = at_most(out.union_lhs, out.union_rhs);
  out.violations += !out.union_holds;
  return out;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "case_id,k_or_patch,boundary_norm,full_norm,ratio,subcritical,status\n";
  for (const CsvRow& r : rows) {
    out << r.case_id << ',' << r.k_or_patch << ',' << format_real(r.boundary_norm) << ','
        << format_real(r.full_norm) << ',' << format_real(r.ratio.value) << ','
        << (r.subcritical ? "true" : "false") << ',' << r.status << '\n';
  }
}

}  // namespace fraclab
