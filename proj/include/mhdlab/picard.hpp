#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/settings.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

struct PicardReport {
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  // Sup over the window of |d rho|^2 + |d P|^2 + |d B|^2 + |sqrt(rho) d u|^2
  // (r-weighted L2) between successive iterates, one entry per iteration.
  std::vector<double> phi;
  double contraction_ratio = 0.0;  // largest phi[k] / phi[k-1]; 0 with one iterate
  int best = 0;                    // index into phi of the returned iterate
  double dt = 0.0;
  std::size_t steps = 0;
  std::string message;
};

struct PicardResult {
  std::vector<FluidState> trajectory;  // steps + 1 levels, uniform dt
  PicardReport report;
};

/// Successive approximation on [t0, t0 + T_window]: iterate k carries rho, P,
/// B and u with the velocity of iterate k-1 (the initial velocity for k = 1)
/// and solves the resulting linear momentum equation with the regular
/// discretization. The transport velocity is fed per Runge-Kutta stage, so the
/// fixed point is exactly the trajectory of `step` with the same dt.
/// Fixed-boundary geometries only.
PicardResult picard_iterate(const FluidState& state0, double T_window, int k_max, double tol,
                            const PhysParams& p, const RadialGrid& grid,
                            const SolverSettings& s);

}  // namespace mhdlab
