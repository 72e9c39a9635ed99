#include <cmath>

#include <doctest.h>

#include "fraclab/error.hpp"
#include "fraclab/geometry.hpp"

using namespace fraclab;

TEST_CASE("interval mesh") {
  const Domain d = build_interval(0.0, 1.0, 4);
  CHECK(d.dimension() == 1);
  REQUIRE(d.cells().size() == 4);
  CHECK(d.cells()[0].centroid[0] == 0.125);
  CHECK(d.cells()[3].measure == 0.25);
  REQUIRE(d.facets().size() == 2);
  CHECK(d.facets()[0].measure == 1.0);
  CHECK(d.facets()[1].cell == 3);
  CHECK(d.volume() == 1.0);
  CHECK(d.diameter() == doctest::Approx(0.75));
}

TEST_CASE("rectangle mesh") {
  const Domain d = build_rectangle({0.0, 0.0}, {2.0, 1.0}, 4, 2);
  CHECK(d.cells().size() == 8);
  CHECK(d.facets().size() == 12);
  double facet_total = 0.0;
  for (const Facet& f : d.facets()) facet_total += f.measure;
  CHECK(facet_total == doctest::Approx(d.perimeter()));
  CHECK(d.perimeter() == doctest::Approx(6.0));
  double cell_total = 0.0;
  for (const Cell& c : d.cells()) cell_total += c.measure;
  CHECK(cell_total == doctest::Approx(2.0));
  for (const Facet& f : d.facets()) {
    const Point& c = d.cells()[f.cell].centroid;
    CHECK(std::hypot(c[0] - f.centroid[0], c[1] - f.centroid[1]) < 0.5 + 1e-12);
  }
}

TEST_CASE("degenerate meshes are rejected") {
  CHECK_THROWS_AS(build_interval(1.0, 1.0, 4), ValidationError);
  CHECK_THROWS_AS(build_interval(0.0, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(build_rectangle({0.0, 0.0}, {1.0, 1.0}, 1, 3), ValidationError);
}

TEST_CASE("refined mesh keeps the shape") {
  const Domain d = build_rectangle({0.0, 0.0}, {1.0, 0.5}, 3, 2).refined(2);
  CHECK(d.resolution()[0] == 6);
  CHECK(d.resolution()[1] == 4);
  CHECK(d.volume() == doctest::Approx(0.5));
}

TEST_CASE("from_cells copies adjacent values to facets") {
  const Domain d = build_interval(0.0, 1.0, 3);
  const GridFunction f = GridFunction::from_cells(d, {1.0, 2.0, 3.0});
  CHECK(f.boundary()[0] == 1.0);
  CHECK(f.boundary()[1] == 3.0);
  const GridFunction g = (f + f.scaled(2.0));
  CHECK(g.interior()[1] == 6.0);
}

TEST_CASE("pair quadrature") {
  const Domain d = build_rectangle({0.0, 0.0}, {1.0, 1.0}, 3, 3);
  const PairQuadrature pq(d, Scope::interior);
  CHECK(pq.points() == 9);
  CHECK(pq.size() == 72);
  CHECK(pq.distance(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(pq.weight(0, 1) == doctest::Approx(1.0 / 81.0));
  const PairQuadrature sub(d, Scope::boundary, {0, 5});
  CHECK(sub.points() == 2);
  CHECK(sub.index(1) == 5);
  const GridFunction f = GridFunction::sample(d, Expression::parse("x1", VariableSet::point));
  CHECK(sub.gather(f)[1] == f.boundary()[5]);
}
