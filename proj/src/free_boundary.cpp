#include "mhdlab/free_boundary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mhdlab/errors.hpp"

namespace mhdlab {

MovingGrid make_moving_grid(long cells, double a0) {
  MovingGrid g;
  g.reference = make_grid(cells, 1.0);
  g.physical = make_grid(cells, a0);
  g.a = a0;
  g.a0 = a0;
  return g;
}

MovingGrid rescale(const MovingGrid& g, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "free boundary collapsed: a = " << a;
    throw NumericalFailure(os.str());
  }
  MovingGrid out = g;
  out.physical = make_grid(static_cast<long>(g.reference.cells()), a);
  out.a = a;
  return out;
}

double boundary_stress_residual(const FluidState& s, const MovingGrid& g, const PhysParams& p) {
  return surface_stress(s, g.physical.nodes, g.physical.dr(), p);
}

DomainAdvance advance_domain(const MovingGrid& g, const FluidState& s, double dt) {
  if (!(dt > 0.0)) throw ConfigError("advance_domain needs dt > 0");
  const double k1 = interpolate(s.u, g.physical, g.a);
  const double mid = g.a + 0.5 * dt * k1;
  const double a_new = g.a + dt * interpolate(s.u, g.physical, mid);
  DomainAdvance out;
  out.grid = rescale(g, a_new);
  out.state = s;
  // Nodes keep their reference coordinate, so the remap is a pullback along the
  // affine map; rho and B carry the Jacobians that keep each annulus' mass and
  // flux, the other fields are carried as they are.
  const double q = g.a / a_new;
  for (double& x : out.state.rho) x *= q * q;
  for (double& x : out.state.B) x *= q;
  auto defect = [](double before, double after) {
    return before != 0.0 ? std::abs(after - before) / std::abs(before) : std::abs(after);
  };
  out.mass_defect = defect(integrate(s.rho, g.physical, Weight::RadialR),
                           integrate(out.state.rho, out.grid.physical, Weight::RadialR));
  out.flux_defect = defect(integrate(s.B, g.physical), integrate(out.state.B, out.grid.physical));
  return out;
}

FreeStep step_free(const FluidState& s, const MovingGrid& g, double dt, const PhysParams& p,
                   const SolverSettings& settings, StepLog* log, const Forcing* forcing) {
  if (s.size() != g.physical.size()) throw ConfigError("state and grid sizes differ");
  Advanced adv = advance(s, g.a, true, dt, p, settings, log, forcing);
  return {std::move(adv.state), rescale(g, adv.a)};
}

GrowthReport growth_check(std::span<const DiagnosticsRecord> h, double a0, double E0,
                          const PhysParams& p) {
  if (h.empty()) throw ConfigError("growth_check needs a nonempty history");
  GrowthReport rep;
  rep.C = envelope_constant(a0, E0, p.nu());
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (const auto& rec : h) {
    if (!rec.a_boundary) continue;
    const double env = a0 + std::sqrt(std::max(rec.t, 0.0) * E0 / p.nu());
    const double excess = *rec.a_boundary - env;
    if (excess > rep.worst_excess) {
      rep.worst_excess = excess;
      rep.worst_t = rec.t;
    }
  }
  rep.pass = rep.worst_excess <= 1e-8;
  if (!rep.pass) {
    std::ostringstream os;
    os << "a(t) exceeds the growth envelope by " << rep.worst_excess << " at t = " << rep.worst_t;
    rep.message = os.str();
  }
  return rep;
}

}  // namespace mhdlab
