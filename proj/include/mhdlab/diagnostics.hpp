#pragma once

#include <optional>
#include <span>

#include "mhdlab/grid.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/state.hpp"
#include "mhdlab/tracker.hpp"

namespace mhdlab {

/// One row of the run ledger. Quantities that do not apply to a run are empty.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  double dissipation_cum = 0.0;
  std::optional<double> flux_vacuum;
  std::optional<double> R_front;
  std::optional<double> a_boundary;
  double div_l2 = 0.0;
  std::optional<double> div_lower_bound;
  std::optional<double> moment_lhs;
  std::optional<double> moment_rhs;
  double max_gradu = 0.0;
  double dt = 0.0;
  double dissipation = 0.0;  // instantaneous rate, feeds the trapezoid in time
};

/// Kinetic + internal + magnetic energy, weight r, 2 pi dropped.
double total_energy(const FluidState& state, const RadialGrid& grid, const PhysParams& p);

/// Viscous dissipation rate (disk: nu |div u|^2; cylinder: full strain form).
double dissipation_rate(const FluidState& state, const RadialGrid& grid, const PhysParams& p);

/// Running time integral of the dissipation rate by the trapezoid rule.
double cumulative_dissipation(std::span<const DiagnosticsRecord> history);

struct EnergyResidual {
  double absolute = 0.0;  // |E(t) + D(t) - E0| / E0, worst over records
  double creation = 0.0;  // max(0, E(t) + D(t) - E0) / E0, worst over records
};

/// Throws ConfigError with fewer than two records. A zero E0 gives zero residuals.
EnergyResidual energy_residual(std::span<const DiagnosticsRecord> history);

/// Nodal u_r + u/r (2 u_r on the axis, one-sided at the outer node).
std::vector<double> nodal_divergence(std::span<const double> u, const RadialGrid& grid);

/// L2(r dr) norm of the divergence.
double div_norm(const FluidState& state, const RadialGrid& grid);

/// g(alpha) = alpha / sqrt(2 alpha - 2) + (alpha + 1) / sqrt(2 alpha), alpha in (1, 2).
double moment_coefficient(double alpha);

struct MomentPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_floor = 0.0;
};

/// Both sides of the vacuum moment identity over [0, front.R] for the
/// multiplier R r^alpha - r^(alpha+1).
MomentPair moment_pair(const FluidState& state, const VacuumFront& front, const RadialGrid& grid,
                       const PhysParams& p, double alpha);

/// The same left side before integration by parts and without the viscosity:
/// integral of (R r^alpha - r^(alpha+1)) d/dr(u_r + u/r) over [0, R].
double moment_unintegrated(std::span<const double> u, const RadialGrid& grid, double R,
                           double alpha);

/// Upper bound used for the left side: nu g(alpha) R^alpha ||div u||.
double moment_lhs_cap(const FluidState& state, const RadialGrid& grid, const PhysParams& p,
                      double R, double alpha);

/// (integral of B^2 r^(alpha-1)) R^(2-alpha)/(2-alpha) - (integral of B)^2 over [0, R].
double cauchy_schwarz_gap(const FluidState& state, const VacuumFront& front,
                          const RadialGrid& grid, double alpha);

}  // namespace mhdlab
