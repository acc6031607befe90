#include "mhdlab/params.hpp"

#include <cmath>

#include "mhdlab/errors.hpp"

namespace mhdlab {

std::string_view to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::Disk2D: return "disk2d";
    case Geometry::Cylinder3D: return "cylinder3d";
    case Geometry::Disk2DFree: return "disk2d-free";
  }
  return "?";
}

Geometry parse_geometry(std::string_view text) {
  if (text == "disk2d") return Geometry::Disk2D;
  if (text == "cylinder3d") return Geometry::Cylinder3D;
  if (text == "disk2d-free") return Geometry::Disk2DFree;
  throw ConfigError("unknown geometry '" + std::string(text) + "'");
}

void PhysParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("physics.mu must be > 0");
  if (!std::isfinite(lam)) throw ConfigError("physics.lambda must be finite");
  const double d = dimension(geometry);
  if (2.0 * mu / d + lam < 0.0)
    throw ConfigError("viscosity restriction 2mu/d + lambda >= 0 violated");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw ConfigError("physics.gamma must be > 1");
}

}  // namespace mhdlab
