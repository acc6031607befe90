#pragma once

#include <span>
#include <string>

#include "mhdlab/bounds.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/settings.hpp"
#include "mhdlab/solver.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

/// Grid on [0, a(t)] obtained by stretching a fixed reference grid on [0, 1].
struct MovingGrid {
  RadialGrid reference;
  RadialGrid physical;
  double a = 0.0;
  double a0 = 0.0;
};

MovingGrid make_moving_grid(long cells, double a0);

/// Same reference grid stretched to outer radius a. Throws NumericalFailure if a <= 0.
MovingGrid rescale(const MovingGrid& g, double a);

/// F = 1/2 B^2 + P - (2mu+lam)(u_r + u/r) at the outer node, one-sided differences.
double boundary_stress_residual(const FluidState& state, const MovingGrid& g, const PhysParams& p);

struct DomainAdvance {
  MovingGrid grid;
  FluidState state;
  double mass_defect = 0.0;  // relative change of the integral of rho r over the remap
  double flux_defect = 0.0;  // relative change of the integral of B
};

/// Moves the outer radius by a midpoint step of a' = u(a) with u frozen and
/// stretches the grid affinely. Fields stay attached to their reference
/// coordinate; rho and B are rescaled so mass and flux of every cell survive.
DomainAdvance advance_domain(const MovingGrid& g, const FluidState& state, double dt);

struct FreeStep {
  FluidState state;
  MovingGrid grid;
};

/// One solver step on the moving domain; the grid follows the outer node.
FreeStep step_free(const FluidState& state, const MovingGrid& g, double dt, const PhysParams& p,
                   const SolverSettings& s, StepLog* log = nullptr,
                   const Forcing* forcing = nullptr);

struct GrowthReport {
  bool pass = true;
  double C = 0.0;           // a0 + sqrt(E0 / nu)
  double worst_excess = 0.0;  // max of a(t) - envelope(t)
  double worst_t = 0.0;
  std::string message;
};

/// Checks a(t) <= a0 + sqrt(t E0 / nu) + 1e-8 on every record carrying a_boundary.
GrowthReport growth_check(std::span<const DiagnosticsRecord> history, double a0, double E0,
                          const PhysParams& p);

}  // namespace mhdlab
