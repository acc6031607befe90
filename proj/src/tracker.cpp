#include "mhdlab/tracker.hpp"

#include <cmath>
#include <sstream>

#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

VacuumFront checked(VacuumFront f, double R_outer) {
  if (!(f.R > 0.0) || f.R > R_outer * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "front left (0, " << R_outer << "]: R = " << f.R;
    throw TrackingError(os.str());
  }
  return f;
}

}  // namespace

VacuumFront advance_front(const VacuumFront& front, const FluidState& state,
                          const RadialGrid& grid, double dt) {
  if (!(dt > 0.0)) throw ConfigError("advance_front needs dt > 0");
  VacuumFront out = front;
  const double k1 = interpolate(state.u, grid, front.R);
  const double mid = front.R + 0.5 * dt * k1;
  out.R = front.R + dt * interpolate(state.u, grid, mid);
  return checked(out, grid.R_outer);
}

VacuumFront advance_front(const VacuumFront& front, const FluidState& before,
                          const RadialGrid& grid_before, const FluidState& after,
                          const RadialGrid& grid_after, double dt) {
  if (!(dt > 0.0)) throw ConfigError("advance_front needs dt > 0");
  VacuumFront out = front;
  const double k1 = interpolate(before.u, grid_before, front.R);
  const double mid = front.R + 0.5 * dt * k1;
  const double k2 =
      0.5 * (interpolate(before.u, grid_before, mid) + interpolate(after.u, grid_after, mid));
  out.R = front.R + dt * k2;
  return checked(out, grid_after.R_outer);
}

double vacuum_flux(const FluidState& state, const VacuumFront& front, const RadialGrid& grid) {
  const PartialRule rule = partial_rule(grid, front.R);
  return rule.apply(rule.sample(state.B, grid));
}

VacuumReport check_vacuum(const FluidState& state, const VacuumFront& front,
                          const RadialGrid& grid, double tol) {
  VacuumReport rep;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size() && grid.nodes[i] < front.R; ++i) {
    rep.max_rho = std::max(rep.max_rho, state.rho[i]);
    rep.max_P = std::max(rep.max_P, state.P[i]);
    const double m = std::max(state.rho[i], state.P[i]);
    if (m > worst) {
      worst = m;
      rep.worst_node = static_cast<std::ptrdiff_t>(i);
    }
  }
  rep.pass = rep.max_rho <= tol && rep.max_P <= tol;
  if (!rep.pass) {
    std::ostringstream os;
    os << "vacuum breached at node " << rep.worst_node << ": max rho " << rep.max_rho
       << ", max P " << rep.max_P << " (tol " << tol << ")";
    rep.message = os.str();
  } else {
    rep.worst_node = -1;
  }
  return rep;
}

}  // namespace mhdlab
