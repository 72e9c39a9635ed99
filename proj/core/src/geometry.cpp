#include "fraclab/geometry.hpp"

#include <cmath>
#include <string>

#include "fraclab/error.hpp"

namespace fraclab {

bool Box::contains(const Point& x, int dimension) const {
  for (int k = 0; k < dimension; ++k)
    if (x[k] < lo[k] || x[k] > hi[k]) return false;
  return true;
}

Domain build_interval(double a, double b, std::size_t cells) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("degenerate interval: need a < b, got (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
  if (cells < 2) throw ValidationError("interval needs at least 2 cells");

  auto data = std::make_shared<Domain::Data>();
  data->dimension = 1;
  const double h = (b - a) / static_cast<double>(cells);
  data->cells.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i)
    data->cells.push_back({Point{a + (static_cast<double>(i) + 0.5) * h, 0.0}, h});
  data->facets.push_back({Point{a, 0.0}, 1.0, Side::left, 0});
  data->facets.push_back({Point{b, 0.0}, 1.0, Side::right, cells - 1});
  data->diameter = static_cast<double>(cells - 1) * h;
  data->volume = b - a;
  data->perimeter = 2.0;
  data->bounds = {Point{a, 0.0}, Point{b, 0.0}};
  data->resolution = {cells, 1};
  data->spacing = {h, 0.0};
  return Domain(std::move(data));
}

Domain build_rectangle(Point lo, Point hi, std::size_t nx, std::size_t ny) {
  if (!(lo[0] < hi[0]) || !(lo[1] < hi[1]))
    throw ValidationError("degenerate rectangle: need lo < hi componentwise");
  if (nx < 2 || ny < 2) throw ValidationError("rectangle needs at least 2 cells per axis");

  auto data = std::make_shared<Domain::Data>();
  data->dimension = 2;
  const double hx = (hi[0] - lo[0]) / static_cast<double>(nx);
  const double hy = (hi[1] - lo[1]) / static_cast<double>(ny);
  auto cx = [&](std::size_t i) { return lo[0] + (static_cast<double>(i) + 0.5) * hx; };
  auto cy = [&](std::size_t j) { return lo[1] + (static_cast<double>(j) + 0.5) * hy; };

  data->cells.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) data->cells.push_back({Point{cx(i), cy(j)}, hx * hy});

  auto cell = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  data->facets.reserve(2 * (nx + ny));
  for (std::size_t i = 0; i < nx; ++i)
    data->facets.push_back({Point{cx(i), lo[1]}, hx, Side::bottom, cell(i, 0)});
  for (std::size_t j = 0; j < ny; ++j)
    data->facets.push_back({Point{hi[0], cy(j)}, hy, Side::right, cell(nx - 1, j)});
  for (std::size_t i = 0; i < nx; ++i)
    data->facets.push_back({Point{cx(i), hi[1]}, hx, Side::top, cell(i, ny - 1)});
  for (std::size_t j = 0; j < ny; ++j)
    data->facets.push_back({Point{lo[0], cy(j)}, hy, Side::left, cell(0, j)});

  const double wx = static_cast<double>(nx - 1) * hx;
  const double wy = static_cast<double>(ny - 1) * hy;
  data->diameter = std::sqrt(wx * wx + wy * wy);
  data->volume = (hi[0] - lo[0]) * (hi[1] - lo[1]);
  data->perimeter = 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
  data->bounds = {lo, hi};
  data->resolution = {nx, ny};
  data->spacing = {hx, hy};
  return Domain(std::move(data));
}

Domain Domain::refined(int factor) const {
  if (factor < 1) throw ValidationError("refinement factor must be >= 1");
  const auto f = static_cast<std::size_t>(factor);
  const Box& b = bounds();
  if (dimension() == 1) return build_interval(b.lo[0], b.hi[0], resolution()[0] * f);
  return build_rectangle(b.lo, b.hi, resolution()[0] * f, resolution()[1] * f);
}

GridFunction::GridFunction(Domain domain, std::vector<double> interior,
                           std::vector<double> boundary)
    : domain_(std::move(domain)), interior_(std::move(interior)), boundary_(std::move(boundary)) {
  if (interior_.size() != domain_.cells().size() || boundary_.size() != domain_.facets().size())
    throw ValidationError("grid function size does not match the mesh");
  for (double v : interior_)
    if (!std::isfinite(v)) throw ValidationError("grid function has a non-finite interior value");
  for (double v : boundary_)
    if (!std::isfinite(v)) throw ValidationError("grid function has a non-finite boundary value");
}

GridFunction GridFunction::sample(const Domain& domain, const Expression& f) {
  if (f.usage().any_y()) throw ValidationError("function expression may not reference y");
  if (!f.usage().compatible_with(domain.dimension()))
    throw ValidationError("function '" + f.source() + "' uses variables not available in " +
                          std::to_string(domain.dimension()) + "D");
  std::vector<double> interior;
  interior.reserve(domain.cells().size());
  for (const Cell& c : domain.cells()) interior.push_back(f(c.centroid));
  std::vector<double> boundary;
  boundary.reserve(domain.facets().size());
  for (const Facet& e : domain.facets()) boundary.push_back(f(e.centroid));
  return GridFunction(domain, std::move(interior), std::move(boundary));
}

GridFunction GridFunction::from_cells(const Domain& domain, std::vector<double> interior) {
  if (interior.size() != domain.cells().size())
    throw ValidationError("grid function size does not match the mesh");
  std::vector<double> boundary;
  boundary.reserve(domain.facets().size());
  for (const Facet& e : domain.facets()) boundary.push_back(interior[e.cell]);
  return GridFunction(domain, std::move(interior), std::move(boundary));
}

GridFunction GridFunction::zero(const Domain& domain) {
  return GridFunction(domain, std::vector<double>(domain.cells().size(), 0.0),
                      std::vector<double>(domain.facets().size(), 0.0));
}

GridFunction GridFunction::scaled(double c) const {
  GridFunction out = *this;
  for (double& v : out.interior_) v *= c;
  for (double& v : out.boundary_) v *= c;
  return out;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (!a.domain_.same_mesh(b.domain_)) throw ValidationError("grid functions live on different meshes");
  GridFunction out = a;
  for (std::size_t i = 0; i < out.interior_.size(); ++i) out.interior_[i] += b.interior_[i];
  for (std::size_t i = 0; i < out.boundary_.size(); ++i) out.boundary_[i] += b.boundary_[i];
  return out;
}

PairQuadrature::PairQuadrature(const Domain& domain, Scope scope)
    : dimension_(domain.dimension()), scope_(scope) {
  const std::size_t m =
      scope == Scope::interior ? domain.cells().size() : domain.facets().size();
  indices_.resize(m);
  for (std::size_t i = 0; i < m; ++i) indices_[i] = i;
  init(domain);
}

PairQuadrature::PairQuadrature(const Domain& domain, Scope scope, std::vector<std::size_t> indices)
    : dimension_(domain.dimension()), scope_(scope), indices_(std::move(indices)) {
  const std::size_t m =
      scope == Scope::interior ? domain.cells().size() : domain.facets().size();
  for (std::size_t k : indices_)
    if (k >= m) throw ValidationError("pair quadrature index out of range");
  init(domain);
}

void PairQuadrature::init(const Domain& domain) {
  points_.reserve(indices_.size());
  measures_.reserve(indices_.size());
  for (std::size_t k : indices_) {
    if (scope_ == Scope::interior) {
      points_.push_back(domain.cells()[k].centroid);
      measures_.push_back(domain.cells()[k].measure);
    } else {
      points_.push_back(domain.facets()[k].centroid);
      measures_.push_back(domain.facets()[k].measure);
    }
  }
  min_distance_ = 1e-15 * std::max(domain.diameter(), 1e-300);
}

double PairQuadrature::distance(std::size_t i, std::size_t j) const {
  const double dx = points_[i][0] - points_[j][0];
  const double dy = points_[i][1] - points_[j][1];
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<double> PairQuadrature::gather(const GridFunction& f) const {
  const auto values = f.values(scope_);
  std::vector<double> out;
  out.reserve(indices_.size());
  for (std::size_t k : indices_) out.push_back(values[k]);
  return out;
}

PairQuadrature pair_quadrature(const Domain& domain, Scope scope) {
  if (scope == Scope::boundary && domain.facets().empty())
    throw ValidationError("domain has no boundary facets");
  return PairQuadrature(domain, scope);
}

}  // namespace fraclab
