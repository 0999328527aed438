#include <benchmark/benchmark.h>

#include "phclab/cone.hpp"
#include "phclab/energetics.hpp"
#include "phclab/geometry.hpp"
#include "phclab/local_graphs.hpp"
#include "phclab/surfaces.hpp"

namespace {

using namespace phc;

const ConeSolution& bench_cone() {
  static ConeSolution cone(6, 7);
  return cone;
}

void BM_OmegaAndJay(benchmark::State& state) {
  const CartesianPoint4 p{0.1, 0.3, -0.2, 0.15};
  const TangentVector4 v{0.3, -0.1, 0.7, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega_at(p).apply(v, v));
    benchmark::DoNotOptimize(jay_at(p)(2, 1));
  }
}
BENCHMARK(BM_OmegaAndJay);

void BM_HalfPeriodQuad(benchmark::State& state) {
  const ConeParam c(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(half_period_quad(c).value);
}
BENCHMARK(BM_HalfPeriodQuad);

void BM_PeriodFromOde(benchmark::State& state) {
  const ConeParam c(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(period_from_ode(c).value);
}
BENCHMARK(BM_PeriodFromOde);

void BM_ConeSample(benchmark::State& state) {
  auto e15 = make_e15(bench_cone(), +1, 0.25);
  double tau = 0.0;
  for (auto _ : state) {
    tau += 0.37;
    benchmark::DoNotOptimize(e15->eval(tau, 0.5).p.z);
  }
}
BENCHMARK(BM_ConeSample);

void BM_HolomorphyResidual(benchmark::State& state) {
  auto e17 = make_e17(2, 1, 0.3);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(holomorphy_residual(*e17, n, n).max_residual);
}
BENCHMARK(BM_HolomorphyResidual)->Arg(32)->Arg(64);

void BM_BallEnergy(benchmark::State& state) {
  auto e15 = make_e15(bench_cone(), +1, 0.25, 2e-4);
  IntegrateOptions opts;
  opts.columns = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        integrate_form(*e15, FormTag::Omega, Region::ball4(0.25, 0.5), opts).value);
}
BENCHMARK(BM_BallEnergy)->Arg(512)->Arg(1024);

void BM_VertexMode(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vertex_mode(1).eigen_residual);
}
BENCHMARK(BM_VertexMode);

}  // namespace

BENCHMARK_MAIN();
