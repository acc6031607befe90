#include "mhdlab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mhdlab/errors.hpp"
#include "mhdlab/solver.hpp"

namespace mhdlab {

namespace {

using Stages = std::vector<std::vector<double>>;

struct Iterate {
  std::vector<FluidState> levels;
  std::vector<Stages> seen;  // per step, the u present at each stage
};

double difference_energy(const FluidState& a, const FluidState& b, const RadialGrid& grid) {
  std::vector<double> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dr = a.rho[i] - b.rho[i], dP = a.P[i] - b.P[i], dB = a.B[i] - b.B[i];
    double du2 = (a.u[i] - b.u[i]) * (a.u[i] - b.u[i]);
    if (a.has_swirl()) {
      du2 += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]) + (a.w[i] - b.w[i]) * (a.w[i] - b.w[i]);
    }
    e[i] = dr * dr + dP * dP + dB * dB + std::max(a.rho[i], 0.0) * du2;
  }
  return integrate(e, grid, Weight::RadialR);
}

}  // namespace

PicardResult picard_iterate(const FluidState& state0, double T_window, int k_max, double tol,
                            const PhysParams& p, const RadialGrid& grid,
                            const SolverSettings& s) {
  if (is_free(p.geometry)) throw ConfigError("picard_iterate: fixed-boundary geometries only");
  if (!(T_window > 0.0)) throw ConfigError("picard_iterate: T_window must be positive");
  if (k_max < 1) throw ConfigError("picard_iterate: k_max must be at least 1");
  if (!(tol > 0.0)) throw ConfigError("picard_iterate: tol must be positive");
  if (state0.size() != grid.size()) throw ConfigError("state and grid sizes differ");

  PicardResult out;
  PicardReport& rep = out.report;
  const double dt0 = cfl_dt(state0, grid, p, s);
  rep.steps = static_cast<std::size_t>(std::ceil(T_window / dt0));
  rep.dt = T_window / static_cast<double>(rep.steps);

  const std::size_t stages = s.scheme == Scheme::SSPRK3_ExplicitViscous ? 3 : 2;
  Iterate prev;
  prev.levels.assign(rep.steps + 1, state0);
  prev.seen.assign(rep.steps, Stages(stages, state0.u));
  for (std::size_t k = 0; k <= rep.steps; ++k) prev.levels[k].t = state0.t + rep.dt * k;

  Iterate best;
  double best_phi = std::numeric_limits<double>::infinity();
  int rises = 0;
  for (int it = 1; it <= k_max; ++it) {
    Iterate cur;
    cur.levels.reserve(rep.steps + 1);
    cur.levels.push_back(state0);
    for (std::size_t n = 0; n < rep.steps; ++n) {
      TransportPlan plan;
      plan.given = &prev.seen[n];
      Advanced next = advance(cur.levels.back(), grid.R_outer, false, rep.dt, p, s, nullptr,
                              nullptr, &plan);
      cur.levels.push_back(std::move(next.state));
      cur.seen.push_back(std::move(plan.seen));
    }
    double phi = 0.0;
    for (std::size_t k = 0; k <= rep.steps; ++k)
      phi = std::max(phi, difference_energy(cur.levels[k], prev.levels[k], grid));
    if (!std::isfinite(phi)) throw NumericalFailure("picard_iterate: non-finite iterate");
    rep.phi.push_back(phi);
    rep.iterations = it;
    if (it > 1) {
      const double last = rep.phi[it - 2];
      const double ratio = last > 0.0 ? phi / last : (phi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      rep.contraction_ratio = std::max(rep.contraction_ratio, ratio);
      rises = phi > last ? rises + 1 : 0;
    }
    if (phi < best_phi) {
      best_phi = phi;
      best = cur;
      rep.best = it - 1;
    }
    if (phi < tol) {
      rep.converged = true;
      break;
    }
    if (rises >= 3) {
      rep.diverged = true;
      break;
    }
    prev = std::move(cur);
  }

  std::ostringstream msg;
  if (rep.converged) {
    msg << "converged after " << rep.iterations << " iterations";
  } else if (rep.diverged) {
    msg << "successive differences grew 3 times in a row; returning iterate " << rep.best + 1;
  } else {
    msg << "k_max reached; returning iterate " << rep.best + 1;
  }
  rep.message = msg.str();
  out.trajectory = std::move(best.levels);
  return out;
}

}  // namespace mhdlab
