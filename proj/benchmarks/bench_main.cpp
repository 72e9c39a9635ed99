#include <benchmark/benchmark.h>

#include "fraclab/embeddings.hpp"
#include "fraclab/modular.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/solver.hpp"

using namespace fraclab;

namespace {

Domain square(std::size_t n) { return build_rectangle({0.0, 0.0}, {1.0, 1.0}, n, n); }

GridFunction smooth(const Domain& d) {
  return GridFunction::sample(
      d, Expression::parse("sin(3.141592653589793 * x1) * sin(3.141592653589793 * x2) + x1",
                           VariableSet::point));
}

ExponentField pair(const char* src, const Domain& d, Role role = Role::exponent) {
  return validate_bounds(ExponentField::parse(src, Arity::pair), d, role);
}

// Threads are passed as the second range argument.
void set_threads(const benchmark::State& state) {
  set_thread_count(static_cast<unsigned>(state.range(1)));
}

void BM_CompileGagliardoConstant(benchmark::State& state) {
  set_threads(state);
  const Domain d = square(static_cast<std::size_t>(state.range(0)));
  const GridFunction f = smooth(d);
  const ExponentField p = pair("2", d);
  const ExponentField s = pair("0.5", d, Role::smoothness);
  const PairQuadrature pq(d, Scope::interior);
  for (auto _ : state) benchmark::DoNotOptimize(compile_gagliardo(f, p, s, pq));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pq.size()));
}
BENCHMARK(BM_CompileGagliardoConstant)->Args({32, 1})->Args({32, 4})->Args({64, 4});

void BM_CompileGagliardoVariable(benchmark::State& state) {
  set_threads(state);
  const Domain d = square(static_cast<std::size_t>(state.range(0)));
  const GridFunction f = smooth(d);
  const ExponentField p = pair("1.8 + 0.2 * (x1 * x1 + y1 * y1)", d);
  const ExponentField s = pair("0.4 + 0.1 * cos(x2 + y2)", d, Role::smoothness);
  const PairQuadrature pq(d, Scope::interior);
  for (auto _ : state) benchmark::DoNotOptimize(compile_gagliardo(f, p, s, pq));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pq.size()));
}
BENCHMARK(BM_CompileGagliardoVariable)->Args({32, 1})->Args({32, 4});

void BM_TraceCheck(benchmark::State& state) {
  set_threads(state);
  const Domain d = square(static_cast<std::size_t>(state.range(0)));
  const GridFunction f = smooth(d);
  const ExponentField p = pair("2", d);
  const ExponentField s = pair("0.5", d, Role::smoothness);
  const ExponentField q =
      validate_bounds(ExponentField::parse("1.5", Arity::boundary), d, Role::exponent);
  const PairQuadrature pq(d, Scope::interior);
  for (auto _ : state) benchmark::DoNotOptimize(trace_check(f, p, q, s, pq));
}
BENCHMARK(BM_TraceCheck)->Args({32, 4})->Args({64, 4})->Unit(benchmark::kMillisecond);

void BM_EnergyAndGradient(benchmark::State& state) {
  set_threads(state);
  const Domain d = square(static_cast<std::size_t>(state.range(0)));
  const EnergyProblem problem = validate_problem(
      {d, ExponentField::parse("1.6 + 0.3 * ((x1 + y1) + (x2 + y2))", Arity::pair),
       ExponentField::parse("0.75", Arity::pair), smooth(d),
       ExponentField::parse("3", Arity::boundary)});
  const EnergyModel model(problem);
  const GridFunction u = random_start(d, 1);
  std::vector<double> grad(model.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.energy(u.interior()));
    model.gradient(u.interior(), grad);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_EnergyAndGradient)->Args({16, 1})->Args({32, 4});

}  // namespace
BENCHMARK_MAIN();
