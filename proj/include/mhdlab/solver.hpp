#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/settings.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

/// Time derivatives of every FluidState field.
struct Tendency {
  std::vector<double> rho, u, P, B, v, w;
};

/// Extra source terms added to a tendency evaluation at time t (used by the
/// manufactured-solution study). Momentum sources go into the `f*` forces.
using Forcing = std::function<void(double t, std::span<const double> r, kernels::Parts&)>;

/// Per-step bookkeeping.
struct StepLog {
  double clipped_mass = 0.0;       // radial-weighted mass removed by clipping rho at 0
  double clipped_pressure = 0.0;
  double stress_residual = 0.0;    // worst relative stress-condition residual over stages
};

Tendency rhs_disk(const FluidState& state, const PhysParams& p, const RadialGrid& grid,
                  const SolverSettings& s);
Tendency rhs_cylinder(const FluidState& state, const PhysParams& p, const RadialGrid& grid,
                      const SolverSettings& s);

/// Largest stable step. Throws NumericalFailure on non-finite input; a step
/// below dt_min is reported by detect_blowup, not here.
double cfl_dt(const FluidState& state, const RadialGrid& grid, const PhysParams& p,
              const SolverSettings& s);

/// One step on a fixed grid (u = 0 at the wall).
FluidState step(const FluidState& state, double dt, const PhysParams& p, const RadialGrid& grid,
                const SolverSettings& s, StepLog* log = nullptr, const Forcing* forcing = nullptr);

/// Stage-wise transport override for the linearized system. Tendency
/// evaluation j of a step carries the fields with `given[j]` instead of the
/// current u, and the u present at that evaluation is appended to `seen`.
struct TransportPlan {
  const std::vector<std::vector<double>>* given = nullptr;
  std::vector<std::vector<double>> seen;
};

/// Result of stepping on [0, a]; `a` is the new outer radius.
struct Advanced {
  FluidState state;
  double a = 0.0;
};

/// Shared integrator. With `free_surface` the outer node moves with the fluid,
/// u there follows from the zero-stress condition, and the grid is rescaled
/// affinely so that node N stays on r = a.
Advanced advance(const FluidState& state, double a, bool free_surface, double dt,
                 const PhysParams& p, const SolverSettings& s, StepLog* log = nullptr,
                 const Forcing* forcing = nullptr, TransportPlan* plan = nullptr);

/// Solves the quasi-static balance 2mu+lam (u_r+u/r)_r = B(B_r+B/r) + P_r for u
/// (and the viscous balances for v, w) at nodes where rho < eps_vac, with the
/// remaining nodes as boundary data. Returns the number of vacuum nodes.
std::size_t project_vacuum(FluidState& state, std::span<const double> r, double dr,
                           const PhysParams& p, const SolverSettings& s);

/// Applies the stage closure to initial data: pins, vacuum balance and, with a
/// free surface, the zero-stress outer velocity.
void enforce_closure(FluidState& state, std::span<const double> r, double dr, const PhysParams& p,
                     const SolverSettings& s, bool free_surface);

/// Largest of |u_r| and |u/r| over the nodes.
double max_velocity_gradient(const FluidState& state, const RadialGrid& grid);

enum class Health { Healthy, Suspected };

struct BlowupCheck {
  Health health = Health::Healthy;
  std::string reason;
  double max_gradu = 0.0;
};

/// `dt` is the step size the caller is about to take (negative to skip that test).
BlowupCheck detect_blowup(const FluidState& state, const RadialGrid& grid,
                          const SolverSettings& s, double dt = -1.0);

/// Outer-node stress 1/2 B^2 + P - (2mu+lam) div u with one-sided differences.
double surface_stress(const FluidState& state, std::span<const double> r, double dr,
                      const PhysParams& p);

}  // namespace mhdlab
