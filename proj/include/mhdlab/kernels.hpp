#pragma once

#include <span>
#include <vector>

#include "mhdlab/params.hpp"
#include "mhdlab/settings.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab::kernels {

/// Artificial-dissipation constants: `k2` gates the first-order Lax-Friedrichs
/// flux by a jump sensor on the field being transported, `k4` is the background
/// fourth-difference coefficient. Both scale with the transport speed |u - w|.
inline constexpr double k2 = 0.5;
inline constexpr double k4 = 1.0 / 32.0;

/// B (rB)_r / r at interior node i. Node 1 takes the ghost (rB)_0 = (rB)_1: no
/// B crosses the first face, and this is the force that pairs with that flux
/// so the magnetic work telescopes exactly.
inline double lorentz(std::span<const double> B, std::span<const double> r, std::size_t i,
                      double h) {
  const double below = i == 1 ? r[1] * B[1] : r[i - 1] * B[i - 1];
  return B[i] * (r[i + 1] * B[i + 1] - below) / (2.0 * h * r[i]);
}

/// Everything a tendency evaluation needs. `r` are physical node radii; on a
/// moving grid the nodes travel with velocity r * grid_rate.
struct Input {
  std::span<const double> r;
  double dr = 0.0;
  const FluidState* state = nullptr;
  const PhysParams* phys = nullptr;
  double eps_vac = 0.0;
  bool free_surface = false;
  double grid_rate = 0.0;
  // Velocity that carries rho, P, B and u. Empty means the state's own u; the
  // linearized system passes the previous iterate here.
  std::span<const double> transport;
};

/// Tendency pieces. rho/P/B are complete time derivatives (at fixed reference
/// coordinate). Momentum-type equations are split into an inviscid force `f*`
/// and a viscous force `l*`, both per unit volume; the velocity tendency is
/// (f + l) / rho_eff. Entries at pinned nodes are zero.
struct Parts {
  std::vector<double> rho, P, B;
  std::vector<double> fu, lu, fv, lv, fw, lw;
  std::vector<double> div;    // divergence of the transport velocity
  std::vector<double> speed;  // |u - w|, the dissipation speed

  void resize(std::size_t n, bool swirl);
};

/// OpenMP-parallel evaluation; each node is computed independently, so the
/// result does not depend on the thread count.
void evaluate(const Input& in, Parts& out);

/// Nodal divergence u_r + u/r (2 u_r on the axis, one-sided at the outer node).
void divergence(std::span<const double> u, std::span<const double> r, double dr,
                std::span<double> out);

}  // namespace mhdlab::kernels

namespace mhdlab::reference {

/// Straightforward serial evaluation of the same discretization, assembled
/// from face arrays. Kept for cross-checking `kernels::evaluate`.
void evaluate(const kernels::Input& in, kernels::Parts& out);

}  // namespace mhdlab::reference
