#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fraclab/exponents.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab::testing {

/// One randomized configuration: mesh, symmetric pair exponent p, pair
/// smoothness s, boundary exponent q and a smooth data function f.
struct CorpusCase {
  std::string id;
  Domain domain;
  ExponentField p;
  ExponentField s;
  ExponentField q;
  std::string f_source;
  GridFunction f;
};

/// Deterministic corpus; roughly a third of the cases are intervals.
std::vector<CorpusCase> make_corpus(std::size_t count, std::uint64_t seed);

/// Random smooth function source (trigonometric polynomial) for a dimension.
std::string random_function(std::mt19937_64& rng, int dimension, double amplitude);

double uniform(std::mt19937_64& rng, double lo, double hi);

}  // namespace fraclab::testing
