#pragma once

#include <cstddef>
#include <string>

#include "mhdlab/grid.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

/// Particle path bounding the vacuum core, with the magnetic flux it encloses.
struct VacuumFront {
  double R = 0.0;
  double r0 = 0.0;
  double C0 = 0.0;
};

/// Midpoint step of R' = u(R) with u frozen at `state`.
VacuumFront advance_front(const VacuumFront& front, const FluidState& state,
                          const RadialGrid& grid, double dt);

/// Midpoint step using u at both ends of the step (each on its own grid); the
/// midpoint velocity is the average of the two interpolated values.
VacuumFront advance_front(const VacuumFront& front, const FluidState& before,
                          const RadialGrid& grid_before, const FluidState& after,
                          const RadialGrid& grid_after, double dt);

/// Integral of B over [0, R] (no radial weight).
double vacuum_flux(const FluidState& state, const VacuumFront& front, const RadialGrid& grid);

struct VacuumReport {
  bool pass = true;
  double max_rho = 0.0;
  double max_P = 0.0;
  std::ptrdiff_t worst_node = -1;  // node holding the largest offending value
  std::string message;
};

/// Maxima of rho and P over nodes strictly inside r < R.
VacuumReport check_vacuum(const FluidState& state, const VacuumFront& front,
                          const RadialGrid& grid, double tol);

}  // namespace mhdlab
