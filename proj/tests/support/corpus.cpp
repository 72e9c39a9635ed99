#include "corpus.hpp"

#include <cmath>
#include <cstdio>

namespace fraclab::testing {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Symmetric pair exponent with values in [lo, lo + span].
std::string pair_exponent(std::mt19937_64& rng, int n, double lo, double span) {
  const char* x = n == 1 ? "x" : "x1";
  const char* y = n == 1 ? "y" : "y1";
  const int kind = static_cast<int>(rng() % 4);
  char buf[256];
  switch (kind) {
    case 0:
      return fmt("%.6f", lo + uniform(rng, 0.0, span));
    case 1:
      std::snprintf(buf, sizeof buf, "%.6f + %.6f * abs(%s - %s)", lo, span * 0.5, x, y);
      return buf;
    case 2:
      std::snprintf(buf, sizeof buf, "%.6f + %.6f * (1 + sin(%.3f * (%s + %s)))", lo,
                    span * 0.5, uniform(rng, 0.5, 3.0), x, y);
      return buf;
    default:
      if (n == 2)
        return fmt("%.6f + %.6f * ((x1*x1 + y1*y1) + (x2 + y2)) / 4", lo, span);
      std::snprintf(buf, sizeof buf, "%.6f + %.6f * max(abs(%s), abs(%s))", lo, span, x, y);
      return buf;
  }
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
  return lo + (hi - lo) * u;
}

std::string random_function(std::mt19937_64& rng, int n, double amplitude) {
  std::string out = fmt("%.6g", amplitude * uniform(rng, -0.5, 0.5));
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int k = 1; k <= terms; ++k) {
    const double a = amplitude * uniform(rng, -1.0, 1.0);
    const double w = uniform(rng, 0.5, 4.0);
    const double phase = uniform(rng, 0.0, 3.0);
    char buf[200];
    if (n == 1) {
      std::snprintf(buf, sizeof buf, " + %.6g * sin(%.4f * x + %.4f)", a, w, phase);
    } else {
      std::snprintf(buf, sizeof buf, " + %.6g * sin(%.4f * x1 + %.4f) * cos(%.4f * x2)", a, w,
                    phase, uniform(rng, 0.0, 3.0));
    }
    out += buf;
  }
  return out;
}

std::vector<CorpusCase> make_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusCase> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const int n = c % 3 == 0 ? 1 : 2;
    Domain domain = [&] {
      if (n == 1) {
        const double a = uniform(rng, -1.0, 0.5);
        return build_interval(a, a + uniform(rng, 0.3, 0.9), 24 + rng() % 40);
      }
      const double w = uniform(rng, 0.3, 0.7);
      const double h = uniform(rng, 0.3, 0.7);
      return build_rectangle({0.0, 0.0}, {w, h}, 6 + rng() % 7, 6 + rng() % 7);
    }();
    const double p_lo = uniform(rng, 1.3, 2.5);
    ExponentField p = validate_bounds(
        ExponentField::parse(pair_exponent(rng, n, p_lo, uniform(rng, 0.1, 1.0)), Arity::pair),
        domain, Role::exponent);
    const double s_lo = uniform(rng, 0.15, 0.6);
    const std::string s_src =
        rng() % 2 ? fmt("%.6f", s_lo)
                  : fmt(n == 1 ? "%.6f + %.6f * cos(x + y)" : "%.6f + %.6f * cos(x1 + y2)",
                        s_lo + 0.1, 0.1);
    ExponentField s =
        validate_bounds(ExponentField::parse(s_src, Arity::pair), domain, Role::smoothness);
    const char* qx = n == 1 ? "x" : "x2";
    ExponentField q = validate_bounds(
        ExponentField::parse(fmt("%.6f + %.6f * ", uniform(rng, 1.2, 2.0), 0.3) + qx + " * " + qx,
                             Arity::boundary),
        domain, Role::exponent);
    const double amplitude = std::pow(10.0, uniform(rng, -2.0, 2.0));
    std::string f_src = random_function(rng, n, amplitude);
    GridFunction f = GridFunction::sample(domain, Expression::parse(f_src, VariableSet::point));
    out.push_back({"case" + std::to_string(c), std::move(domain), std::move(p), std::move(s),
                   std::move(q), std::move(f_src), std::move(f)});
  }
  return out;
}

}  // namespace fraclab::testing
