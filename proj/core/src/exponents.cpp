#include "fraclab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

Expression::ReferenceTable reference_table(const FieldTable& fields) {
  Expression::ReferenceTable table;
  for (const auto& [name, field] : fields)
    table.emplace(name, Expression::Reference{&field.expression(),
                                              field.arity() == Arity::pair ? 2 : 1});
  return table;
}

std::string format_point(const Point& x, int dimension) {
  std::ostringstream os;
  os.precision(17);
  if (dimension == 1) {
    os << "(" << x[0] << ")";
  } else {
    os << "(" << x[0] << ", " << x[1] << ")";
  }
  return os.str();
}

const char* role_name(Role role) {
  switch (role) {
    case Role::exponent: return "exponent";
    case Role::smoothness: return "smoothness order";
    case Role::holder_target: return "Hoelder target exponent";
    case Role::data: return "data";
  }
  return "field";
}

// Running extremum with the sample that attains it.
struct Extremes {
  double inf = std::numeric_limits<double>::infinity();
  double sup = -std::numeric_limits<double>::infinity();
  Point inf_at{}, inf_at_y{};
  Point sup_at{}, sup_at_y{};
  bool non_finite = false;
  Point bad_at{}, bad_at_y{};

  void add(double v, const Point& x, const Point& y = Point{}) {
    if (!std::isfinite(v)) {
      if (!non_finite) {
        non_finite = true;
        bad_at = x;
        bad_at_y = y;
      }
      return;
    }
    if (v < inf) {
      inf = v;
      inf_at = x;
      inf_at_y = y;
    }
    if (v > sup) {
      sup = v;
      sup_at = x;
      sup_at_y = y;
    }
  }
};

std::vector<Point> interior_samples(const Domain& domain, int refinement) {
  std::vector<Point> pts;
  for (const Cell& c : domain.cells()) pts.push_back(c.centroid);
  if (refinement > 1)
    for (const Cell& c : domain.refined(refinement).cells()) pts.push_back(c.centroid);
  return pts;
}

std::vector<Point> corner_points(const Domain& domain) {
  const Box& b = domain.bounds();
  if (domain.dimension() == 1) return {b.lo, b.hi};
  return {b.lo, Point{b.hi[0], b.lo[1]}, b.hi, Point{b.lo[0], b.hi[1]}};
}

}  // namespace

ExponentField ExponentField::parse(std::string_view source, Arity arity,
                                   const FieldTable& references) {
  const VariableSet vars = arity == Arity::pair ? VariableSet::pair : VariableSet::point;
  ExponentField field(Expression::parse(source, vars, reference_table(references)), arity);
  field.symmetric_ = field.is_constant();
  return field;
}

ExponentField ExponentField::constant(double value, Arity arity) {
  ExponentField field(Expression::constant(value), arity);
  field.symmetric_ = true;
  return field;
}

ExponentField ExponentField::diagonal() const {
  if (arity_ != Arity::pair) return *this;
  Expression::ReferenceTable table{{"self", Expression::Reference{&expr_, 2}}};
  Expression diag = Expression::parse("self(x, x)", VariableSet::point, table)
                        .renamed("diag(" + expr_.source() + ")");
  ExponentField out(std::move(diag), Arity::domain);
  out.symmetric_ = true;
  return out;
}

ExponentField ExponentField::transposed() const {
  ExponentField out = *this;
  if (arity_ == Arity::pair) out.expr_ = expr_.swapped();
  return out;
}

ExponentField symmetric_extension(const ExponentField& p) {
  if (p.arity() == Arity::pair)
    throw ValidationError("symmetric extension needs a univariate field");
  Expression::ReferenceTable table{{"p", Expression::Reference{&p.expression(), 1}}};
  Expression e = Expression::parse("(p(x) + p(y)) / 2", VariableSet::pair, table)
                     .renamed("(p(x) + p(y)) / 2 with p = " + p.source());
  ExponentField out(std::move(e), Arity::pair);
  out.symmetric_ = true;
  return out;
}

ExponentField validate_bounds(ExponentField field, const Domain& domain, Role role,
                              int refinement) {
  const int n = domain.dimension();
  if (!field.expression().usage().compatible_with(n))
    throw ValidationError("field '" + field.source() + "' uses variables not available in " +
                          std::to_string(n) + "D");

  Extremes ext;
  bool symmetric = field.symmetric_;
  if (field.is_constant()) {
    ext.add(field.constant_value(), Point{});
    symmetric = true;
  } else if (field.arity() == Arity::pair) {
    std::vector<Point> pts;
    for (const Cell& c : domain.cells()) pts.push_back(c.centroid);
    for (const Facet& e : domain.facets()) pts.push_back(e.centroid);
    symmetric = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const double v = field(pts[i], pts[j]);
        ext.add(v, pts[i], pts[j]);
        if (j < i && v != field(pts[j], pts[i])) symmetric = false;
      }
    }
  } else {
    std::vector<Point> pts = field.arity() == Arity::boundary
                                 ? boundary_samples(domain, refinement)
                                 : interior_samples(domain, refinement);
    if (field.arity() == Arity::domain) {
      for (const Facet& e : domain.facets()) pts.push_back(e.centroid);
      for (const Point& c : corner_points(domain)) pts.push_back(c);
    }
    for (const Point& x : pts) ext.add(field(x), x);
  }

  const bool pair = field.arity() == Arity::pair && !field.is_constant();
  auto where = [&](const Point& x, const Point& y) {
    return pair ? "at " + format_point(x, n) + " x " + format_point(y, n)
                : "at " + format_point(x, n);
  };
  const std::string name = std::string(role_name(role)) + " '" + field.source() + "'";
  if (ext.non_finite)
    throw ValidationError(name + " is not finite " + where(ext.bad_at, ext.bad_at_y));

  std::ostringstream os;
  os.precision(17);
  switch (role) {
    case Role::exponent:
      if (!(ext.inf > 1.0)) {
        os << name << ": inf = " << ext.inf << " <= 1 " << where(ext.inf_at, ext.inf_at_y);
        throw ValidationError(os.str());
      }
      break;
    case Role::holder_target:
      if (!(ext.inf >= 1.0)) {
        os << name << ": inf = " << ext.inf << " < 1 " << where(ext.inf_at, ext.inf_at_y);
        throw ValidationError(os.str());
      }
      break;
    case Role::smoothness:
      if (!(ext.inf > 0.0)) {
        os << name << ": inf = " << ext.inf << " <= 0 " << where(ext.inf_at, ext.inf_at_y);
        throw ValidationError(os.str());
      }
      if (!(ext.sup < 1.0)) {
        os << name << ": sup = " << ext.sup << " >= 1 " << where(ext.sup_at, ext.sup_at_y);
        throw ValidationError(os.str());
      }
      break;
    case Role::data:
      break;
  }

  field.bounds_ = Bounds{ext.inf, ext.sup};
  if (field.arity() == Arity::pair) field.symmetric_ = symmetric;
  return field;
}

double ExtendedReal::value() const {
  if (infinite_) throw std::logic_error("value() of an infinite ExtendedReal");
  return value_;
}

ExtendedReal critical_trace_exponent(double p, double s, int n) {
  const double nd = static_cast<double>(n);
  const double denom = nd - s * p;
  if (denom <= 0.0) return ExtendedReal::infinity();
  return ExtendedReal((nd - 1.0) * p / denom);
}

ExtendedReal critical_trace_exponent(const ExponentField& p, const ExponentField& s, int n,
                                     const Point& x) {
  return critical_trace_exponent(p(x), s(x), n);
}

std::vector<Point> boundary_samples(const Domain& domain, int refinement) {
  std::vector<Point> pts;
  for (const Facet& e : domain.facets()) {
    pts.push_back(e.centroid);
    if (domain.dimension() == 2 && refinement > 1) {
      const bool horizontal = e.side == Side::bottom || e.side == Side::top;
      for (int k = 0; k < refinement; ++k) {
        const double offset = ((k + 0.5) / refinement - 0.5) * e.measure;
        Point x = e.centroid;
        x[horizontal ? 0 : 1] += offset;
        pts.push_back(x);
      }
    }
  }
  if (domain.dimension() == 2)
    for (const Point& c : corner_points(domain)) pts.push_back(c);
  return pts;
}

GapResult subcritical_gap(const ExponentField& p, const ExponentField& q,
                          const ExponentField& s, const Domain& domain, int refinement) {
  const int n = domain.dimension();
  const auto pts = boundary_samples(domain, refinement);
  GapResult best{ExtendedReal::infinity(), true, pts.front(), ExtendedReal::infinity(),
                 q(pts.front())};
  for (const Point& x : pts) {
    const ExtendedReal crit = critical_trace_exponent(p, s, n, x);
    const double qx = q(x);
    const ExtendedReal gap = crit.minus(qx);
    if (gap < best.gap) {
      best.gap = gap;
      best.witness = x;
      best.critical_at_witness = crit;
      best.q_at_witness = qx;
    }
  }
  best.subcritical = best.gap.is_infinite() || best.gap.value() > 0.0;
  return best;
}

namespace {

struct PatchSamples {
  std::vector<Point> interior;  // refined cell centroids + boundary samples in the box
  std::vector<Point> boundary;  // boundary samples in the box
};

PatchSamples collect_samples(const Box& box, int n, const std::vector<Point>& refined_cells,
                             const std::vector<Point>& boundary_pts) {
  PatchSamples s;
  for (const Point& x : refined_cells)
    if (box.contains(x, n)) s.interior.push_back(x);
  for (const Point& x : boundary_pts) {
    if (!box.contains(x, n)) continue;
    s.interior.push_back(x);
    s.boundary.push_back(x);
  }
  return s;
}

// Centers along the boundary spaced `stride` apart, every corner included.
std::vector<Point> patch_centers(const Domain& domain, double stride) {
  const Box& b = domain.bounds();
  if (domain.dimension() == 1) return {b.lo, b.hi};
  const std::array<Point, 4> corners{b.lo, Point{b.hi[0], b.lo[1]}, b.hi,
                                     Point{b.lo[0], b.hi[1]}};
  std::vector<Point> centers;
  for (int side = 0; side < 4; ++side) {
    const Point& a = corners[side];
    const Point& c = corners[(side + 1) % 4];
    const double len = std::abs(c[0] - a[0]) + std::abs(c[1] - a[1]);
    const auto steps = static_cast<std::size_t>(std::ceil(len / stride - 1e-12));
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = std::min(1.0, static_cast<double>(k) * stride / len);
      centers.push_back(Point{a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1])});
    }
  }
  return centers;
}

}  // namespace

GapCertificate covering_partition(const ExponentField& p, const ExponentField& q,
                                  const ExponentField& s, const Domain& domain, double k,
                                  const CoveringOptions& options) {
  const int n = domain.dimension();
  const GapResult gap = subcritical_gap(p, q, s, domain, options.refinement);
  if (!gap.subcritical) {
    std::ostringstream os;
    os.precision(17);
    os << "covering needs a subcritical configuration; p* - q = "
       << gap.gap.to_double() << " at " << format_point(gap.witness, n);
    throw ValidationError(os.str());
  }
  if (!(k > 0.0) || !(gap.gap.is_infinite() || k <= gap.gap.value()))
    throw ValidationError("gap k must satisfy 0 < k <= min(p* - q)");

  const Domain refined = domain.refined(options.refinement);
  std::vector<Point> refined_cells;
  for (const Cell& c : refined.cells()) refined_cells.push_back(c.centroid);
  const std::vector<Point> bpts = boundary_samples(domain, options.refinement);

  const double max_h = std::max(domain.spacing()[0], domain.spacing()[1]);
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  struct Work {
    Patch patch;
    PatchSamples samples;
    double q_max;
    double s_inf;
  };
  std::vector<Work> work;
  double epsilon = options.initial_epsilon;
  bool covered = false;
  for (int attempt = 0; attempt <= options.epsilon_retries && !covered; ++attempt) {
    const double side = epsilon / sqrt_n;
    // A corner patch reaches side/2 into the domain along each axis and
    // needs two cell centroids in that reach.
    if (side / 2.0 <= 1.5 * max_h)
      throw NumericError("covering patches would fall below mesh resolution (epsilon = " +
                         std::to_string(epsilon) + ")");
    work.clear();
    bool all_ok = true;
    for (const Point& c : patch_centers(domain, side / 2.0)) {
      Work w{};
      Box box{c, c};
      for (int a = 0; a < n; ++a) {
        box.lo[a] = std::max(domain.bounds().lo[a], c[a] - side / 2.0);
        box.hi[a] = std::min(domain.bounds().hi[a], c[a] + side / 2.0);
      }
      w.patch.box = box;
      for (std::size_t i = 0; i < domain.cells().size(); ++i)
        if (box.contains(domain.cells()[i].centroid, n)) w.patch.cells.push_back(i);
      for (std::size_t i = 0; i < domain.facets().size(); ++i)
        if (box.contains(domain.facets()[i].centroid, n)) w.patch.facets.push_back(i);
      double diam2 = 0.0;
      for (int a = 0; a < n; ++a) diam2 += (box.hi[a] - box.lo[a]) * (box.hi[a] - box.lo[a]);
      w.patch.diameter = std::sqrt(diam2);
      w.samples = collect_samples(box, n, refined_cells, bpts);

      w.q_max = -std::numeric_limits<double>::infinity();
      for (const Point& x : w.samples.boundary) w.q_max = std::max(w.q_max, q(x));

      // Sampled inf over B x B of p, s and the pair critical exponent.
      double p_inf = std::numeric_limits<double>::infinity();
      double s_inf = std::numeric_limits<double>::infinity();
      ExtendedReal crit_min = ExtendedReal::infinity();
      if (p.is_constant() && s.is_constant()) {
        p_inf = p.constant_value();
        s_inf = s.constant_value();
        crit_min = critical_trace_exponent(p_inf, s_inf, n);
      } else {
        for (const Point& z : w.samples.interior) {
          for (const Point& y : w.samples.interior) {
            const double pv = p(z, y);
            const double sv = s(z, y);
            p_inf = std::min(p_inf, pv);
            s_inf = std::min(s_inf, sv);
            const ExtendedReal cv = critical_trace_exponent(pv, sv, n);
            if (cv < crit_min) crit_min = cv;
          }
        }
      }
      w.patch.p_inf = p_inf;
      w.s_inf = s_inf;
      w.patch.condition_12 = crit_min.minus(w.q_max).at_least(k / 2.0);
      all_ok = all_ok && w.patch.condition_12;
      work.push_back(std::move(w));
    }
    if (all_ok) {
      covered = true;
    } else {
      epsilon /= 2.0;
    }
  }
  if (!covered) throw NumericError("could not satisfy the k/2 margin on every patch");

  std::vector<char> facet_hit(domain.facets().size(), 0);
  for (const Work& w : work) {
    if (w.patch.cells.size() < 2) throw NumericError("covering patch holds fewer than 2 cells");
    for (std::size_t f : w.patch.facets) facet_hit[f] = 1;
  }
  if (std::find(facet_hit.begin(), facet_hit.end(), 0) != facet_hit.end())
    throw NumericError("covering misses a boundary facet");

  double p_minus = p.bounds() ? p.bounds()->inf : std::numeric_limits<double>::infinity();
  for (const Work& w : work) p_minus = std::min(p_minus, w.patch.p_inf);
  double delta = std::min(0.1, (p_minus - 1.0) / 2.0);
  if (!(delta > 0.0)) throw ValidationError("exponent p must exceed 1");

  for (int retry = 0; retry <= options.delta_retries; ++retry) {
    bool all_ok = true;
    for (Work& w : work) {
      Patch& patch = w.patch;
      patch.p_frozen = patch.p_inf - delta;
      patch.s_frozen = w.s_inf;
      const ExtendedReal crit = critical_trace_exponent(patch.p_frozen, patch.s_frozen, n);
      const double target = k / 3.0 + w.q_max;
      patch.condition_13 = crit.at_least(target) && patch.p_frozen - 1.0 > delta;
      const double sp = patch.s_frozen * patch.p_frozen;
      patch.trace_regime = 1.0 < sp && sp < n;

      // Auxiliary order: halfway between the smallest t that keeps the
      // frozen trace exponent above the target and s_frozen.
      double t_min = 0.0;
      if (n > 1) t_min = (n - (n - 1) * patch.p_frozen / target) / patch.p_frozen;
      t_min = std::max(t_min, 0.0);
      patch.t_aux = t_min < patch.s_frozen ? 0.5 * (t_min + patch.s_frozen)
                                           : 0.5 * patch.s_frozen;
      all_ok = all_ok && patch.condition_13;
    }
    if (all_ok) {
      GapCertificate cert;
      cert.gap_k = k;
      cert.epsilon = epsilon;
      cert.delta = delta;
      cert.refinement = options.refinement;
      cert.delta_retries_used = retry;
      for (Work& w : work) cert.patches.push_back(std::move(w.patch));
      return cert;
    }
    delta /= 2.0;
  }
  throw NumericError("frozen exponents fail the k/3 margin after " +
                     std::to_string(options.delta_retries) + " delta retries");
}

}  // namespace fraclab
