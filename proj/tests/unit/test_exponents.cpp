#include <cmath>

#include <doctest.h>

#include "fraclab/error.hpp"
#include "fraclab/exponents.hpp"

using namespace fraclab;

namespace {
const Domain& unit_square() {
  static const Domain d = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 16, 16);
  return d;
}
ExponentField field(const char* src, Arity arity, Role role = Role::exponent,
                    const Domain& d = unit_square()) {
  return validate_bounds(ExponentField::parse(src, arity), d, role);
}
}  // namespace

TEST_CASE("parse and bounds") {
  const Domain d = build_interval(0.0, 1.0, 8);
  const ExponentField two = field("2", Arity::domain, Role::exponent, d);
  CHECK(two.is_constant());
  CHECK(two.bounds()->inf == 2.0);
  CHECK(two.bounds()->sup == 2.0);
  const ExponentField affine = field("2 + x", Arity::domain, Role::exponent, d);
  CHECK(affine.bounds()->inf == doctest::Approx(2.0));
  CHECK(affine.bounds()->sup == doctest::Approx(3.0));
  CHECK_THROWS_AS(field("0.5", Arity::domain, Role::exponent, d), ValidationError);
  CHECK_THROWS_AS(field("1.2", Arity::pair, Role::smoothness, d), ValidationError);
  CHECK_NOTHROW(field("1", Arity::domain, Role::holder_target, d));
  CHECK_THROWS_AS(ExponentField::parse("2 + y", Arity::domain), ValidationError);
}

TEST_CASE("validation is idempotent") {
  const ExponentField p = field("1.5 + x1 * y2", Arity::pair);
  const ExponentField again = validate_bounds(p, unit_square(), Role::exponent);
  CHECK(again.bounds()->inf == p.bounds()->inf);
  CHECK(again.bounds()->sup == p.bounds()->sup);
  CHECK_FALSE(p.symmetric());
  CHECK(field("1.5 + x1 * y1", Arity::pair).symmetric());
}

TEST_CASE("symmetric extension has the original diagonal") {
  const ExponentField p = ExponentField::parse("2 + x1 / 2 + x2 * x2", Arity::domain);
  FieldTable refs{{"p", p}};
  const ExponentField ext = ExponentField::parse("(p(x) + p(y)) / 2", Arity::pair, refs);
  const ExponentField built = symmetric_extension(p);
  CHECK(built.symmetric());
  for (const Cell& c : unit_square().cells()) {
    CHECK(ext(c.centroid) == doctest::Approx(p(c.centroid)).epsilon(1e-15));
    CHECK(built(c.centroid) == doctest::Approx(p(c.centroid)).epsilon(1e-15));
  }
  const Point a{0.1, 0.2}, b{0.7, 0.4};
  CHECK(ext.transposed()(a, b) == ext(b, a));
}

TEST_CASE("critical trace exponent") {
  CHECK(critical_trace_exponent(2.0, 0.5, 2).value() == 2.0);
  CHECK(critical_trace_exponent(3.0, 0.8, 2).is_infinite());
  CHECK(critical_trace_exponent(2.0, 0.5, 3).value() == 2.0);
  CHECK(critical_trace_exponent(2.0, 1.0, 2).is_infinite());
  CHECK(ExtendedReal(5.0) < ExtendedReal::infinity());
  CHECK_FALSE(ExtendedReal::infinity() < ExtendedReal(5.0));
}

TEST_CASE("subcritical gap") {
  const ExponentField p = field("2", Arity::pair);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness);
  const GapResult a = subcritical_gap(p, field("1.5", Arity::boundary), s, unit_square());
  CHECK(a.subcritical);
  CHECK(a.gap.value() == doctest::Approx(0.5));
  const GapResult b = subcritical_gap(p, field("3", Arity::boundary), s, unit_square());
  CHECK_FALSE(b.subcritical);
  CHECK(b.q_at_witness == 3.0);
  const GapResult c =
      subcritical_gap(p, field("1.2 + 0.5 * x1", Arity::boundary), s, unit_square());
  CHECK(c.gap.value() == doctest::Approx(0.3));
  CHECK(c.witness[0] == doctest::Approx(1.0));

  const ExponentField high_s = field("0.8", Arity::pair, Role::smoothness);
  const ExponentField three = field("3", Arity::pair);
  CHECK(subcritical_gap(three, field("5", Arity::boundary), high_s, unit_square())
            .gap.is_infinite());
}

TEST_CASE("gap is monotone in q") {
  const ExponentField p = field("1.8 + 0.3 * (x1 + y1)", Arity::pair);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness);
  double last = INFINITY;
  for (double shift : {1.1, 1.2, 1.3, 1.4}) {
    const std::string src = std::to_string(shift) + " + 0.2 * x2";
    const GapResult g = subcritical_gap(p, field(src.c_str(), Arity::boundary), s, unit_square());
    CHECK(g.gap.to_double() <= last);
    last = g.gap.to_double();
  }
}

namespace {
// Independent re-check of a certificate at double resolution.
void reverify(const GapCertificate& cert, const ExponentField& p, const ExponentField& q,
              const ExponentField& s, const Domain& d) {
  const int n = d.dimension();
  const std::vector<Point> samples = boundary_samples(d, 2 * cert.refinement);
  for (const Patch& patch : cert.patches) {
    CHECK(patch.diameter < cert.epsilon);
    CHECK(cert.epsilon < 1.0);
    CHECK(patch.p_frozen - 1.0 > cert.delta);
    CHECK(patch.p_frozen < patch.p_inf - cert.delta + 1e-15);
    CHECK(patch.condition_12);
    CHECK(patch.condition_13);
    std::vector<Point> in;
    for (const Point& x : samples)
      if (patch.box.contains(x, n)) in.push_back(x);
    for (const Point& x : in) {
      const ExtendedReal frozen = critical_trace_exponent(patch.p_frozen, patch.s_frozen, n);
      CHECK(frozen.at_least(cert.gap_k / 3.0 + q(x) - 1e-12));
      for (const Point& y : in) {
        const ExtendedReal local = critical_trace_exponent(p(x, y), s(x, y), n);
        CHECK(local.minus(q(x)).at_least(cert.gap_k / 2.0 - 1e-12));
      }
    }
  }
}
}  // namespace

TEST_CASE("covering certificate, constant exponents") {
  const ExponentField p = field("2", Arity::pair);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness);
  const ExponentField q = field("1.5", Arity::boundary);
  const GapCertificate cert = covering_partition(p, q, s, unit_square(), 0.5);
  CHECK(cert.gap_k == 0.5);
  CHECK(cert.delta == doctest::Approx(0.1));
  REQUIRE_FALSE(cert.patches.empty());
  for (const Patch& patch : cert.patches) CHECK(patch.p_frozen == doctest::Approx(1.9));
  // 1.9 / (2 - 0.95) >= 0.5 / 3 + 1.5
  CHECK(critical_trace_exponent(1.9, 0.5, 2).value() >= 0.5 / 3.0 + 1.5);
  reverify(cert, p, q, s, unit_square());
  std::vector<bool> covered(unit_square().facets().size(), false);
  for (const Patch& patch : cert.patches)
    for (std::size_t f : patch.facets) covered[f] = true;
  for (bool c : covered) CHECK(c);
}

TEST_CASE("covering certificate, variable exponents") {
  const ExponentField p = field("1.8 + 0.2 * (x1 * x1 + y1 * y1)", Arity::pair);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness);
  const ExponentField q = field("1.2 + 0.3 * x1", Arity::boundary);
  const GapResult gap = subcritical_gap(p, q, s, unit_square());
  REQUIRE(gap.subcritical);
  const GapCertificate cert = covering_partition(p, q, s, unit_square(), gap.gap.value());
  reverify(cert, p, q, s, unit_square());
}

TEST_CASE("covering refuses patches below mesh resolution") {
  const Domain coarse = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 4, 4);
  const ExponentField p = field("2", Arity::pair, Role::exponent, coarse);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness, coarse);
  CHECK_THROWS_AS(
      covering_partition(p, field("1.5", Arity::boundary, Role::exponent, coarse), s, coarse, 0.5),
      NumericError);
}

TEST_CASE("covering rejects supercritical input") {
  const ExponentField p = field("2", Arity::pair);
  const ExponentField s = field("0.5", Arity::pair, Role::smoothness);
  CHECK_THROWS_AS(covering_partition(p, field("3", Arity::boundary), s, unit_square(), 0.5),
                  ValidationError);
  CHECK_THROWS_AS(covering_partition(p, field("1.5", Arity::boundary), s, unit_square(), 0.9),
                  ValidationError);
}
