#include "config.hpp"

#include <cmath>

#include "fraclab/error.hpp"

namespace fraclab::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

}  // namespace

Reader::Reader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) fail(path_, "expected an object");
}

std::string Reader::path(std::string_view key) const {
  return path_ + "." + std::string(key);
}

bool Reader::has(std::string_view key) const { return object_.contains(key); }

const json& Reader::required(std::string_view key) {
  const json* v = optional(key);
  if (!v) fail(path(key), "missing required key");
  return *v;
}

const json* Reader::optional(std::string_view key) {
  const auto it = object_.find(key);
  if (it == object_.end()) return nullptr;
  used_.emplace(key);
  return &*it;
}

double Reader::number(std::string_view key) {
  const json& v = required(key);
  if (!v.is_number()) fail(path(key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path(key), "expected a finite number");
  return x;
}

double Reader::number(std::string_view key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long Reader::integer(std::string_view key, long min) {
  const json& v = required(key);
  if (!v.is_number_integer()) fail(path(key), "expected an integer");
  const long x = v.get<long>();
  if (x < min) fail(path(key), "expected an integer >= " + std::to_string(min));
  return x;
}

long Reader::integer(std::string_view key, long min, long fallback) {
  return has(key) ? integer(key, min) : fallback;
}

bool Reader::boolean(std::string_view key, bool fallback) {
  const json* v = optional(key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(path(key), "expected true or false");
  return v->get<bool>();
}

std::string Reader::string(std::string_view key) {
  const json& v = required(key);
  if (!v.is_string()) fail(path(key), "expected a string");
  return v.get<std::string>();
}

std::string Reader::string(std::string_view key, std::string fallback) {
  return has(key) ? string(key) : fallback;
}

std::vector<double> Reader::numbers(std::string_view key) {
  const json& v = required(key);
  if (!v.is_array()) fail(path(key), "expected an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) fail(path(key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Reader Reader::object(std::string_view key) { return Reader(required(key), path(key)); }

void Reader::finish() const {
  for (const auto& [key, value] : object_.items())
    if (!used_.contains(key)) fail(path(key), "unknown key");
}

Domain read_domain(Reader r) {
  const std::string type = r.string("type");
  Domain d = [&] {
    if (type == "interval") {
      const double a = r.number("a", 0.0);
      const double b = r.number("b", 1.0);
      const long cells = r.integer("cells", 2);
      return build_interval(a, b, static_cast<std::size_t>(cells));
    }
    if (type == "rectangle") {
      std::vector<double> lo{0.0, 0.0};
      std::vector<double> hi{1.0, 1.0};
      if (r.has("lo")) lo = r.numbers("lo");
      if (r.has("hi")) hi = r.numbers("hi");
      const std::vector<double> cells = r.numbers("cells");
      if (lo.size() != 2 || hi.size() != 2) fail(r.path("lo"), "expected two coordinates");
      if (cells.size() != 2 || cells[0] != std::floor(cells[0]) ||
          cells[1] != std::floor(cells[1]) || cells[0] < 2 || cells[1] < 2)
        fail(r.path("cells"), "expected two integers >= 2");
      return build_rectangle({lo[0], lo[1]}, {hi[0], hi[1]}, static_cast<std::size_t>(cells[0]),
                             static_cast<std::size_t>(cells[1]));
    }
    fail(r.path("type"), "expected \"interval\" or \"rectangle\"");
  }();
  r.finish();
  return d;
}

namespace {

Arity parse_arity(const std::string& s, const std::string& path) {
  if (s == "domain") return Arity::domain;
  if (s == "pair") return Arity::pair;
  if (s == "boundary") return Arity::boundary;
  fail(path, "expected \"domain\", \"pair\" or \"boundary\"");
}

ExponentField parse_source(const json& v, const std::string& path, Arity arity,
                           const FieldTable& definitions) {
  if (v.is_number()) return ExponentField::constant(v.get<double>(), arity);
  if (!v.is_string()) fail(path, "expected a number or an expression string");
  try {
    return ExponentField::parse(v.get<std::string>(), arity, definitions);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

}  // namespace

FieldTable read_definitions(Reader& root) {
  FieldTable table;
  const json* defs = root.optional("definitions");
  if (!defs) return table;
  Reader all(*defs, root.path("definitions"));
  for (const auto& [name, value] : defs->items()) {
    Reader entry = all.object(name);
    const Arity arity = parse_arity(entry.string("arity"), entry.path("arity"));
    ExponentField f = parse_source(entry.required("expr"), entry.path("expr"), arity, table);
    entry.finish();
    table.emplace(name, std::move(f));
  }
  return table;
}

ExponentField read_field(Reader& r, std::string_view key, Arity arity,
                         const FieldTable& definitions) {
  return parse_source(r.required(key), r.path(key), arity, definitions);
}

ExponentField read_field(Reader& r, std::string_view key, Arity arity,
                         const FieldTable& definitions, const Domain& domain, Role role) {
  ExponentField f = read_field(r, key, arity, definitions);
  try {
    return validate_bounds(std::move(f), domain, role);
  } catch (const ValidationError& e) {
    fail(r.path(key), e.what());
  }
}

GridFunction read_function(Reader& r, std::string_view key, const Domain& domain,
                           const FieldTable& definitions) {
  const ExponentField f = read_field(r, key, Arity::domain, definitions);
  if (!f.expression().usage().compatible_with(domain.dimension()))
    fail(r.path(key), "variables do not match the domain dimension");
  return GridFunction::sample(domain, f.expression());
}

Scope read_scope(Reader& r) {
  const std::string s = r.string("scope", "interior");
  if (s == "interior") return Scope::interior;
  if (s == "boundary") return Scope::boundary;
  fail(r.path("scope"), "expected \"interior\" or \"boundary\"");
}

}  // namespace fraclab::cli
