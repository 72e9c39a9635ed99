#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fraclab/expression.hpp"

namespace fraclab {

struct Cell {
  Point centroid;
  double measure;  ///< n-volume
};

enum class Side { left, right, bottom, top };

/// A boundary piece. In 1D the two facets are the interval endpoints and
/// carry counting measure 1; in 2D they are edge segments.
struct Facet {
  Point centroid;
  double measure;  ///< (n-1)-area
  Side side;       ///< outward side
  std::size_t cell;  ///< the adjacent interior cell
};

struct Box {
  Point lo;
  Point hi;
  bool contains(const Point& x, int dimension) const;
};

/// A uniformly meshed interval or rectangle. Immutable; copies share storage.
class Domain {
 public:
  int dimension() const { return data_->dimension; }
  std::span<const Cell> cells() const { return data_->cells; }
  std::span<const Facet> facets() const { return data_->facets; }
  /// Largest distance between two cell centroids.
  double diameter() const { return data_->diameter; }
  /// Exact |Omega| and |boundary| of the meshed shape.
  double volume() const { return data_->volume; }
  double perimeter() const { return data_->perimeter; }
  const Box& bounds() const { return data_->bounds; }
  /// Cells per axis (second entry is 1 in 1D).
  std::array<std::size_t, 2> resolution() const { return data_->resolution; }
  /// Uniform mesh width along each axis.
  std::array<double, 2> spacing() const { return data_->spacing; }

  /// Same shape with `factor` times as many cells per axis.
  Domain refined(int factor) const;

  bool same_mesh(const Domain& other) const { return data_ == other.data_; }

 private:
  struct Data {
    int dimension = 1;
    std::vector<Cell> cells;
    std::vector<Facet> facets;
    double diameter = 0.0;
    double volume = 0.0;
    double perimeter = 0.0;
    Box bounds{};
    std::array<std::size_t, 2> resolution{};
    std::array<double, 2> spacing{};
  };
  explicit Domain(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;

  friend Domain build_interval(double a, double b, std::size_t cells);
  friend Domain build_rectangle(Point lo, Point hi, std::size_t nx, std::size_t ny);
};

/// Uniform mesh of (a, b); requires a < b and at least 2 cells.
Domain build_interval(double a, double b, std::size_t cells);
/// Uniform nx-by-ny mesh of the box [lo, hi]; at least 2 cells per axis.
Domain build_rectangle(Point lo, Point hi, std::size_t nx, std::size_t ny);

enum class Scope { interior, boundary };

/// Cell-centroid values plus facet values (the trace) of a function.
class GridFunction {
 public:
  GridFunction(Domain domain, std::vector<double> interior, std::vector<double> boundary);

  /// Evaluate `f` at cell centroids and facet centroids.
  static GridFunction sample(const Domain& domain, const Expression& f);
  /// Interior values given; each facet takes the value of its adjacent cell.
  static GridFunction from_cells(const Domain& domain, std::vector<double> interior);
  static GridFunction zero(const Domain& domain);

  const Domain& domain() const { return domain_; }
  std::span<const double> interior() const { return interior_; }
  std::span<const double> boundary() const { return boundary_; }
  std::span<const double> values(Scope scope) const {
    return scope == Scope::interior ? interior() : boundary();
  }

  GridFunction scaled(double c) const;
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);

 private:
  Domain domain_;
  std::vector<double> interior_;
  std::vector<double> boundary_;
};

/// All ordered pairs (i, j), i != j, over a set of sample points (cell or
/// facet centroids) with weight |e_i||e_j| and centroid distance |x_i - x_j|.
///
/// The pair set is implicit: for an m-point set there are m(m-1) pairs,
/// enumerated row by row in lexicographic (i, j) order. Reductions over it
/// go through `reduce_rows` so the summation order is fixed.
class PairQuadrature {
 public:
  /// All cells (interior) or all facets (boundary) of `domain`.
  PairQuadrature(const Domain& domain, Scope scope);
  /// Restriction to the listed cell or facet indices (kept in given order).
  PairQuadrature(const Domain& domain, Scope scope, std::vector<std::size_t> indices);

  int dimension() const { return dimension_; }
  Scope scope() const { return scope_; }
  std::size_t points() const { return points_.size(); }
  std::size_t size() const { return points_.size() * (points_.size() - (points_.empty() ? 0 : 1)); }
  const Point& point(std::size_t i) const { return points_[i]; }
  double measure(std::size_t i) const { return measures_[i]; }
  /// Index of sample i in the domain's cell or facet list.
  std::size_t index(std::size_t i) const { return indices_[i]; }
  double weight(std::size_t i, std::size_t j) const { return measures_[i] * measures_[j]; }
  double distance(std::size_t i, std::size_t j) const;
  /// Smallest admissible pair distance; anything below signals a corrupt mesh.
  double min_distance() const { return min_distance_; }

  /// Pick this quadrature's samples out of a grid function.
  std::vector<double> gather(const GridFunction& f) const;

 private:
  void init(const Domain& domain);

  int dimension_;
  Scope scope_;
  std::vector<std::size_t> indices_;
  std::vector<Point> points_;
  std::vector<double> measures_;
  double min_distance_ = 0.0;
};

PairQuadrature pair_quadrature(const Domain& domain, Scope scope);

}  // namespace fraclab
