// Serial reference versus OpenMP kernels: DG residual, MPS limiter and one
// SSP-RK3 step of the heat problem. Run with OMP_NUM_THREADS to compare.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "mpsdg/assembly.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/mesh.hpp"
#include "mpsdg/problems.hpp"
#include "mpsdg/quadrature.hpp"
#include "mpsdg/timestep.hpp"

using namespace mpsdg;

namespace {

struct Setup {
  ProblemSpec problem = linear_diffusion(1.0);
  TriMesh mesh;
  DGField field;
  SchemeConfig scheme;

  explicit Setup(int n)
      : mesh(generate_structured(n, n, problem.domain, MeshPattern::obtuse, true)),
        field(project_field(problem.initial, mesh, triangle_rule(5))) {
    scheme.flux.h_mode = ScaleMode::gauss_point_scale;
  }
};

DGField noisy_field(std::size_t cells) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 0.3);
  std::uniform_real_distribution<double> avg(0.0, 1.0);
  DGField u(cells);
  for (auto& p : u.cells) {
    for (auto& c : p.c) c = g(rng);
    p.c[0] += avg(rng) - p.average();
  }
  return u;
}

void residual_bench(benchmark::State& state, Exec exec) {
  const Setup s(static_cast<int>(state.range(0)));
  const SpatialOperator op(s.mesh, s.problem, s.scheme);
  Residual r;
  for (auto _ : state) {
    op.residual(s.field, 0.0, r, exec);
    benchmark::DoNotOptimize(r.data());
  }
  state.counters["cells"] = static_cast<double>(s.mesh.num_cells());
  state.counters["threads"] = exec == Exec::parallel ? omp_get_max_threads() : 1;
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.mesh.num_cells()));
}

void limiter_bench(benchmark::State& state, bool parallel) {
  const DGField base = noisy_field(static_cast<std::size_t>(state.range(0)));
  const Bounds bounds = Bounds::constant(0.0, 1.0);
  for (auto _ : state) {
    state.PauseTiming();
    DGField u = base;
    state.ResumeTiming();
    const LimiterStats st = parallel ? mps_limit(u, bounds, 0.0) : mps_limit_serial(u, bounds, 0.0);
    benchmark::DoNotOptimize(st);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void rk3_bench(benchmark::State& state, Exec exec) {
  const Setup s(static_cast<int>(state.range(0)));
  const SpatialOperator op(s.mesh, s.problem, s.scheme);
  const RhsFn rhs = [&](const DGField& u, double t, Residual& r) { op.residual(u, t, r, exec); };
  const double dt = 1e-7;
  for (auto _ : state) {
    state.PauseTiming();
    DGField u = s.field;
    state.ResumeTiming();
    ssp_rk3_step(u, 0.0, dt, rhs, [&](DGField& f, double t) { mps_limit(f, s.problem.bounds, t); });
    benchmark::DoNotOptimize(u.cells.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(residual_bench, serial, Exec::serial)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(residual_bench, parallel, Exec::parallel)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(limiter_bench, serial, false)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(limiter_bench, parallel, true)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(rk3_bench, serial, Exec::serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(rk3_bench, parallel, Exec::parallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
