#include "mhdlab/state.hpp"

#include <cmath>

namespace mhdlab {

FluidState FluidState::zeros(std::size_t nodes, bool swirl) {
  FluidState s;
  s.rho.assign(nodes, 0.0);
  s.u.assign(nodes, 0.0);
  s.P.assign(nodes, 0.0);
  s.B.assign(nodes, 0.0);
  if (swirl) {
    s.v.assign(nodes, 0.0);
    s.w.assign(nodes, 0.0);
  }
  return s;
}

void pin_boundaries(FluidState& s, Geometry geometry) {
  s.u.front() = 0.0;
  s.B.front() = 0.0;
  if (s.has_swirl()) s.v.front() = 0.0;
  if (!is_free(geometry)) {
    s.u.back() = 0.0;
    if (s.has_swirl()) {
      s.v.back() = 0.0;
      s.w.back() = 0.0;
    }
  }
}

std::string invariant_violation(const FluidState& s, Geometry geometry, double tol) {
  const std::size_t n = s.size();
  if (s.u.size() != n || s.P.size() != n || s.B.size() != n) return "field sizes differ";
  if (has_swirl(geometry) != s.has_swirl()) return "swirl fields do not match geometry";
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.rho[i] >= -tol)) return "rho < 0 at node " + std::to_string(i);
    if (!(s.P[i] >= -tol)) return "P < 0 at node " + std::to_string(i);
  }
  if (s.u.front() != 0.0) return "u(0) != 0";
  if (s.B.front() != 0.0) return "B(0) != 0";
  if (s.has_swirl() && s.v.front() != 0.0) return "v(0) != 0";
  if (!is_free(geometry)) {
    if (s.u.back() != 0.0) return "u(R) != 0";
    if (s.has_swirl() && (s.v.back() != 0.0 || s.w.back() != 0.0)) return "v(R) or w(R) != 0";
  }
  return {};
}

}  // namespace mhdlab
