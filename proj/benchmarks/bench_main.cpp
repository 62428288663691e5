#include <benchmark/benchmark.h>

#include "clab/diagnostics.hpp"
#include "clab/identity_suite.hpp"
#include "clab/scan.hpp"

using namespace clab;

static void BM_Psi(benchmark::State& state) {
  double s = 0.0;
  for (auto _ : state) {
    for (int i = 1; i <= 1000; ++i) s += psi(i * 1e-3, 0.5);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Psi);

static void BM_IdentitySuite(benchmark::State& state) {
  const auto m = metric_from_id("paraboloid", 2);
  for (auto _ : state) benchmark::DoNotOptimize(run_identity_suite(m, 0.5, 100, 7, 1));
}
BENCHMARK(BM_IdentitySuite)->Unit(benchmark::kMillisecond);

static void BM_CarlemanSides(benchmark::State& state) {
  const auto g = PiecewiseCoefficient::constant(1, 2);
  const auto u = make_bump(2, {0.01, 0.04, 5, 0.3, 0.2}, {SupportKind::PuncturedBall, 0.0, 0.04});
  const auto m = MetricField::identity(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(carleman_sides(u, g, m, static_cast<double>(state.range(0)), WeightParams(0.5),
                                            Estimate::Thm21));
}
BENCHMARK(BM_CarlemanSides)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Mesh(benchmark::State& state) {
  MeshOptions o;
  o.h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(disk_mesh(o));
}
BENCHMARK(BM_Mesh)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SolveDirichlet(benchmark::State& state) {
  MeshOptions o;
  o.h = 1.0 / static_cast<double>(state.range(0));
  const Mesh mesh = disk_mesh(o);
  TransmissionProblem pb;
  pb.a = PiecewiseCoefficient::constant(1, 3);
  pb.bc.data = named_function("piecewise-quadratic", 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve(pb, mesh, 1));
  state.counters["unknowns"] = static_cast<double>(mesh.num_nodes());
}
BENCHMARK(BM_SolveDirichlet)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SolveNeumann(benchmark::State& state) {
  MeshOptions o;
  o.h = 1.0 / static_cast<double>(state.range(0));
  const Mesh mesh = disk_mesh(o);
  TransmissionProblem pb;
  pb.bc.kind = BoundaryCondition::Kind::Neumann;
  pb.bc.data = named_function("cos");
  for (auto _ : state) benchmark::DoNotOptimize(solve(pb, mesh, 1));
}
BENCHMARK(BM_SolveNeumann)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Mass(benchmark::State& state) {
  MeshOptions o;
  o.h = 1.0 / 64.0;
  const auto u = interpolate(disk_mesh(o), named_function("harmonic:2"));
  for (auto _ : state) benchmark::DoNotOptimize(mass(u, 0.37));
}
BENCHMARK(BM_Mass)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
