#pragma once

#include <string>
#include <string_view>

namespace mhdlab {

enum class Geometry { Disk2D, Cylinder3D, Disk2DFree };

/// Spatial dimension entering the viscosity restriction 2mu/d + lambda >= 0.
constexpr int dimension(Geometry g) noexcept { return g == Geometry::Cylinder3D ? 3 : 2; }
constexpr bool has_swirl(Geometry g) noexcept { return g == Geometry::Cylinder3D; }
constexpr bool is_free(Geometry g) noexcept { return g == Geometry::Disk2DFree; }

std::string_view to_string(Geometry g) noexcept;
Geometry parse_geometry(std::string_view text);

struct PhysParams {
  double mu = 1.0;
  double lam = 0.0;
  double gamma = 1.4;
  Geometry geometry = Geometry::Disk2D;

  /// Longitudinal viscosity 2mu + lambda.
  double nu() const noexcept { return 2.0 * mu + lam; }

  /// Throws ConfigError when mu <= 0, 2mu/d + lambda < 0 or gamma <= 1.
  void validate() const;
};

}  // namespace mhdlab
