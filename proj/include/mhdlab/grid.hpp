#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mhdlab {

/// Uniform node-centred discretization of [0, R_outer]; node 0 sits at the axis.
struct RadialGrid {
  std::vector<double> nodes;
  double R_outer = 0.0;
  std::vector<double> spacing;       // per-cell widths, size N
  std::vector<double> quad_weights;  // composite trapezoid, size N + 1

  std::size_t cells() const noexcept { return spacing.size(); }
  std::size_t size() const noexcept { return nodes.size(); }
  double dr() const noexcept { return spacing.empty() ? 0.0 : spacing.front(); }
};

enum class Weight { Plain, RadialR };

/// Uniform grid with `cells` cells. Throws ConfigError for non-positive input.
RadialGrid make_grid(long cells, double R_outer);

/// Trapezoid quadrature of nodal samples; RadialR integrates samples * r.
double integrate(std::span<const double> samples, const RadialGrid& grid,
                 Weight weight = Weight::Plain);

/// Linear interpolation of nodal samples at radius r (clamped to the grid).
double interpolate(std::span<const double> samples, const RadialGrid& grid, double r);

/// Quadrature rule on [0, R] built from the grid nodes below R plus the point R
/// itself; the partial last cell is covered by a trapezoid through R. Fields are
/// evaluated at R by linear interpolation before being multiplied by weights.
struct PartialRule {
  std::vector<double> points;   // r_0 .. r_k, R   (R omitted when it is a node)
  std::vector<double> weights;
  std::size_t last_node = 0;    // k

  /// Values of a nodal field at `points` (interpolated at the final point).
  std::vector<double> sample(std::span<const double> nodal, const RadialGrid& grid) const;
  double apply(std::span<const double> values_at_points) const;
};

PartialRule partial_rule(const RadialGrid& grid, double R);

}  // namespace mhdlab
