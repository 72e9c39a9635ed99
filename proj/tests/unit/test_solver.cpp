#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "fraclab/error.hpp"
#include "fraclab/solver.hpp"
#include "solver_checks.hpp"

using namespace fraclab;

namespace {
GridFunction sample(const Domain& d, const char* src) {
  return GridFunction::sample(d, Expression::parse(src, VariableSet::point));
}
EnergyProblem problem(const Domain& d, const char* p, const char* s, const char* g,
                      const char* r = "5") {
  return {d, ExponentField::parse(p, Arity::pair), ExponentField::parse(s, Arity::pair),
          sample(d, g), ExponentField::parse(r, Arity::boundary)};
}
double sup_distance(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
  return out;
}
}  // namespace

TEST_CASE("energy closed forms") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 8, 8);
  const EnergyProblem pr = problem(sq, "2", "0.25", "1");
  CHECK(energy(GridFunction::zero(sq), pr) == 0.0);
  const EnergyProblem free = problem(sq, "2", "0.25", "0");
  CHECK(energy(sample(sq, "1.5"), free) == doctest::Approx(1.125).epsilon(1e-13));
  const Domain d = build_interval(0.0, 1.0, 256);
  const EnergyProblem line = problem(d, "2", "0.25", "0");
  CHECK(std::abs(energy(sample(d, "x"), line) - (4.0 / 15.0 + 1.0 / 6.0)) < 2e-3);
}

TEST_CASE("gradient closed forms and linearity") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 6, 6);
  const EnergyProblem free = problem(sq, "2", "0.25", "0");
  const GridFunction at_zero = gradient(GridFunction::zero(sq), free);
  for (double v : at_zero.interior()) CHECK(v == 0.0);

  const EnergyProblem pr = problem(sq, "2", "0.25", "1 + x1");
  const GridFunction u1 = sample(sq, "sin(3 * x1) * x2");
  const GridFunction u2 = sample(sq, "x1 * x1 - x2");
  const GridFunction offset = gradient(GridFunction::zero(sq), pr);
  const GridFunction sum = gradient(u1 + u2, pr);
  const GridFunction parts = gradient(u1, pr) + gradient(u2, pr);
  for (std::size_t k = 0; k < sum.interior().size(); ++k)
    CHECK(std::abs(sum.interior()[k] - (parts.interior()[k] - offset.interior()[k])) < 1e-12);

  // Only the load survives at u = 0.
  const GridFunction grad = gradient(GridFunction::zero(sq), pr);
  double expected = 0.0;
  std::vector<double> load(sq.cells().size(), 0.0);
  for (std::size_t e = 0; e < sq.facets().size(); ++e)
    load[sq.facets()[e].cell] += sq.facets()[e].measure * pr.g.boundary()[e];
  for (std::size_t k = 0; k < load.size(); ++k) {
    CHECK(grad.interior()[k] == doctest::Approx(-load[k]));
    expected = std::max(expected, load[k] / sq.cells()[k].measure);
  }
  CHECK(el_residual(GridFunction::zero(sq), pr) == doctest::Approx(expected));
}

TEST_CASE("gradient matches finite differences") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 5, 5);
  const EnergyProblem pr = problem(sq, "2.5", "0.4", "x1 - x2");
  CHECK(testing::finite_difference_error(pr, sample(sq, "sin(2 * x1) + x2")) <= 1e-5);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const EnergyProblem q = testing::random_nonquadratic(seed, 5);
    CHECK(testing::finite_difference_error(q, random_start(sq, seed)) <= 1e-5);
  }
}

TEST_CASE("energy change agrees with the difference of energies") {
  const EnergyProblem pr = testing::random_nonquadratic(11, 6);
  const EnergyModel model(pr);
  const GridFunction u = random_start(pr.domain, 3);
  const GridFunction d = random_start(pr.domain, 4);
  for (double t : {1e-3, 0.1, 1.0}) {
    std::vector<double> moved(u.interior().begin(), u.interior().end());
    for (std::size_t k = 0; k < moved.size(); ++k) moved[k] += t * d.interior()[k];
    const double direct = model.energy(moved) - model.energy(u.interior());
    CHECK(model.energy_change(u.interior(), d.interior(), t) ==
          doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("midpoint convexity") {
  const EnergyProblem pr = testing::random_nonquadratic(5, 6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridFunction u = random_start(pr.domain, 100 + seed);
    const GridFunction v = random_start(pr.domain, 200 + seed);
    const double gu = energy(u, pr), gv = energy(v, pr);
    const double mid = energy((u + v).scaled(0.5), pr);
    CHECK(mid < 0.5 * gu + 0.5 * gv - 1e-12 * std::max({1.0, std::abs(gu), std::abs(gv)}));
  }
}

TEST_CASE("zero load gives the zero minimizer") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 6, 6);
  const SolverReport r = minimize(validate_problem(problem(sq, "2", "0.25", "0")));
  CHECK(r.status == SolverStatus::converged);
  CHECK(r.energy == 0.0);
  CHECK(r.el_residual <= 1e-8);
  for (double v : r.minimizer.interior()) CHECK(v == 0.0);
}

TEST_CASE("p = 2 minimizer matches the direct solve") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 8, 8);
  const EnergyProblem pr = validate_problem(problem(sq, "2", "0.25", "1"));
  SolverOptions opts;
  opts.tol = 1e-11;
  const SolverReport r = minimize(pr, opts);
  REQUIRE(r.status == SolverStatus::converged);
  const std::vector<double> exact = testing::linear_oracle(sq, 0.25, pr.g);
  CHECK(sup_distance(r.minimizer.interior(), exact) <= 1e-8);
  for (std::size_t k = 1; k < r.history.size(); ++k)
    CHECK(r.history[k].energy <= r.history[k - 1].energy);
}

TEST_CASE("two starts agree") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 8, 8);
  const EnergyProblem pr = validate_problem(problem(sq, "2", "0.25", "1 + x1 * x2"));
  SolverOptions opts;
  const SolverReport a = minimize(pr, opts);
  const SolverReport b = minimize(pr, opts, random_start(sq, opts.seed));
  REQUIRE(a.status == SolverStatus::converged);
  REQUIRE(b.status == SolverStatus::converged);
  CHECK(sup_distance(a.minimizer.interior(), b.minimizer.interior()) <= 10 * opts.tol);

  const EnergyProblem nq = testing::random_nonquadratic(8, 6);
  opts.accelerate = true;
  const SolverReport c = minimize(nq, opts);
  const SolverReport e = minimize(nq, opts, random_start(nq.domain, opts.seed));
  REQUIRE(c.status == SolverStatus::converged);
  REQUIRE(e.status == SolverStatus::converged);
  CHECK(sup_distance(c.minimizer.interior(), e.minimizer.interior()) <= 10 * opts.tol);
}

TEST_CASE("iteration budget is reported") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 6, 6);
  SolverOptions opts;
  opts.max_iter = 2;
  const SolverReport r = minimize(validate_problem(problem(sq, "2", "0.25", "1")), opts);
  CHECK(r.status == SolverStatus::nonconverged);
  CHECK(r.iterations == 2);
}

TEST_CASE("problem validation") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 6, 6);
  CHECK_THROWS_AS(validate_problem(problem(sq, "2", "0.25", "1", "4")), ValidationError);
  CHECK_THROWS_AS(validate_problem(problem(sq, "2 + x1", "0.25", "1")), ValidationError);
  CHECK_NOTHROW(validate_problem(problem(sq, "2 + x1 * y1", "0.25", "1")));
}

TEST_CASE("coercivity probe") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 6, 6);
  const GridFunction u = sample(sq, "1 + x1");
  const CoercivityReport free = coercivity_probe(u, problem(sq, "2", "0.25", "0"), {1, 2, 4, 8});
  REQUIRE(free.increasing.has_value());
  CHECK(*free.increasing);
  CHECK(free.rows[1].ratio == doctest::Approx(2.0 * free.rows[0].ratio));
  const CoercivityReport loaded =
      coercivity_probe(u, problem(sq, "2", "0.25", "1"), {1, 2, 4, 8});
  CHECK(loaded.rows.back().ratio > loaded.rows[2].ratio);
  const CoercivityReport single = coercivity_probe(u, problem(sq, "2", "0.25", "0"), {1});
  CHECK_FALSE(single.increasing.has_value());
  CHECK_THROWS_AS(coercivity_probe(GridFunction::zero(sq), problem(sq, "2", "0.25", "0"), {1}),
                  ValidationError);
}

TEST_CASE("random start is deterministic") {
  const Domain sq = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 4, 4);
  const GridFunction a = random_start(sq, 42), b = random_start(sq, 42);
  for (std::size_t k = 0; k < a.interior().size(); ++k) {
    CHECK(a.interior()[k] == b.interior()[k]);
    CHECK(std::abs(a.interior()[k]) <= 1.0);
  }
}
