// OpenMP tendency kernel against the serial reference, plus a whole step.
#include <benchmark/benchmark.h>

#include <cmath>

#include "mhdlab/grid.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/solver.hpp"

using namespace mhdlab;

namespace {

struct Setup {
  RadialGrid grid;
  FluidState state;
  PhysParams phys;

  explicit Setup(long N, bool swirl) : grid(make_grid(N, 1.0)), state(FluidState::zeros(grid.size(), swirl)) {
    phys.geometry = swirl ? Geometry::Cylinder3D : Geometry::Disk2D;
    phys.mu = 0.01;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.nodes[i];
      state.rho[i] = 1.0 + 0.3 * std::cos(3 * r);
      state.P[i] = 1.0 + 0.2 * std::sin(2 * r);
      state.u[i] = 0.1 * r * (1 - r);
      state.B[i] = r * (1 - r);
      if (swirl) {
        state.v[i] = 0.05 * r * (1 - r);
        state.w[i] = 0.05 * r * r * (1 - r);
      }
    }
  }

  kernels::Input input() const {
    kernels::Input in;
    in.r = grid.nodes;
    in.dr = grid.dr();
    in.state = &state;
    in.phys = &phys;
    in.eps_vac = 1e-4;
    return in;
  }
};

template <void (*F)(const kernels::Input&, kernels::Parts&)>
void tendency(benchmark::State& st) {
  const Setup s(st.range(0), st.range(1) != 0);
  kernels::Parts parts;
  const kernels::Input in = s.input();
  for (auto _ : st) {
    F(in, parts);
    benchmark::DoNotOptimize(parts.rho.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void full_step(benchmark::State& st) {
  Setup s(st.range(0), false);
  const SolverSettings settings;
  const double dt = cfl_dt(s.state, s.grid, s.phys, settings);
  for (auto _ : st) {
    FluidState next = step(s.state, dt, s.phys, s.grid, settings);
    benchmark::DoNotOptimize(next.u.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(tendency<kernels::evaluate>)->Name("omp_evaluate")->ArgsProduct({{1024, 16384, 262144}, {0, 1}});
BENCHMARK(tendency<reference::evaluate>)->Name("serial_evaluate")->ArgsProduct({{1024, 16384, 262144}, {0, 1}});
BENCHMARK(full_step)->Arg(1024)->Arg(16384)->Arg(262144);

BENCHMARK_MAIN();
