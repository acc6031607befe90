#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhdlab/params.hpp"

namespace mhdlab {

/// Nodal fields of the symmetric MHD system. `v` and `w` are empty unless the
/// geometry carries swirl and axial velocity.
struct FluidState {
  std::vector<double> rho, u, P, B;
  std::vector<double> v, w;
  double t = 0.0;

  std::size_t size() const noexcept { return rho.size(); }
  bool has_swirl() const noexcept { return !v.empty(); }

  static FluidState zeros(std::size_t nodes, bool swirl);
};

/// Pins the axis and wall values required by the boundary conditions.
void pin_boundaries(FluidState& s, Geometry geometry);

/// Returns an empty string when the state satisfies its invariants, otherwise
/// a description of the first violation found.
std::string invariant_violation(const FluidState& s, Geometry geometry, double tol = 0.0);

}  // namespace mhdlab
