#include <vector>

#include <doctest.h>

#include "fraclab/parallel.hpp"

using namespace fraclab;

namespace {
double harmonic(std::size_t rows) {
  return reduce_rows(
      rows, 0.0, [](std::size_t i, double& acc) { acc += 1.0 / (1.0 + static_cast<double>(i)); },
      [](double& total, const double& part) { total += part; });
}
}  // namespace

TEST_CASE("reduction is bit-identical across thread counts") {
  const unsigned saved = thread_count();
  set_thread_count(1);
  const double one = harmonic(10007);
  set_thread_count(4);
  const double four = harmonic(10007);
  set_thread_count(7);
  const double seven = harmonic(10007);
  set_thread_count(saved);
  CHECK(one == four);
  CHECK(one == seven);
}

TEST_CASE("every block runs exactly once") {
  std::vector<int> hits(100, 0);
  run_blocks(hits.size(), [&](std::size_t b) { hits[b] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(harmonic(0) == 0.0);
}
