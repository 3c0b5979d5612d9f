#include <benchmark/benchmark.h>

#include "scalred/diffkit.hpp"
#include "scalred/dynamics.hpp"
#include "scalred/reduction.hpp"
#include "scalred/scenarios.hpp"

using namespace scalred;

namespace {

Vec point(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

void BM_HessianLagrangian(benchmark::State& state) {
  const auto s = builtin("jacobi-arctan");
  const Vec z = point({1.0, 1.0, 0.1, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(hessian(s.lagrangian->lagrangian, z));
}
BENCHMARK(BM_HessianLagrangian);

void BM_ReducedHessian(benchmark::State& state) {
  const auto ell = builtin("jacobi-arctan").reduced();
  const Vec z = ell.state(point({0.7}), point({0.3}), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hessian(ell.ell, z));
}
BENCHMARK(BM_ReducedHessian);

void BM_ElAcceleration(benchmark::State& state) {
  const auto s = builtin("jacobi-arctan");
  const Vec q = point({1.0, 1.0}), v = point({0.1, -0.2});
  for (auto _ : state) benchmark::DoNotOptimize(el_acceleration(*s.lagrangian, q, v));
}
BENCHMARK(BM_ElAcceleration);

void BM_SlpRates(benchmark::State& state) {
  const auto ell = builtin("jacobi-arctan").reduced();
  const Vec x = point({0.7}), xd = point({0.3});
  for (auto _ : state) benchmark::DoNotOptimize(slp_rates(ell, x, xd, 0.5));
}
BENCHMARK(BM_SlpRates);

void BM_IntegrateEl(benchmark::State& state) {
  const auto s = builtin("jacobi-arctan");
  const IntegratorConfig cfg{static_cast<std::size_t>(state.range(0)), 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_el(*s.lagrangian, *s.initial.q, *s.initial.qdot, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntegrateEl)->Arg(500)->Arg(2000)->Complexity(benchmark::oN);

void BM_IntegrateSlp(benchmark::State& state) {
  const auto s = builtin("jacobi-arctan");
  const auto ell = s.reduced();
  const auto p = s.initial_reduced();
  const IntegratorConfig cfg{static_cast<std::size_t>(state.range(0)), 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_slp(ell, p.x, p.xdot, p.y, cfg, 1.0));
}
BENCHMARK(BM_IntegrateSlp)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
