#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mhdlab/grid.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/scenario.hpp"
#include "mhdlab/solver.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

/// Smooth decaying disk solution used to measure convergence:
///   rho = P = 1 + A e^-t cos(k r),  u = A e^-t sin(k r) r / R,  B = A e^-t sin(k r),
/// with k = pi / R. The forcing makes it an exact solution of the forced system.
struct ManufacturedSolution {
  double A = 0.1;
  double R = 1.0;
  PhysParams phys;

  FluidState exact(const RadialGrid& grid, double t) const;
  Forcing forcing() const;
};

struct ConvergenceRow {
  long N = 0;
  double err_rho = 0.0, err_u = 0.0, err_P = 0.0, err_B = 0.0;
  // Observed orders against the previous row; empty on the first row.
  std::optional<double> p_rho, p_u, p_P, p_B;
};

/// L2(r dr) norm of a - b.
double l2_error(std::span<const double> a, std::span<const double> b, const RadialGrid& grid);

/// Runs the forced problem to cfg.t_end for each N.
std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& cfg, std::span<const long> N_list);

/// Advances the manufactured problem on one grid; returns the final state.
FluidState solve_manufactured(const ScenarioConfig& cfg, long N, double t_end);

}  // namespace mhdlab
