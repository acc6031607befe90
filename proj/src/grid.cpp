#include "mhdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

RadialGrid make_grid(long cells, double R_outer) {
  if (cells <= 0 || !(R_outer > 0.0) || !std::isfinite(R_outer)) {
    throw ConfigError("grid needs N > 0 and R_outer > 0 (got N=" + std::to_string(cells) +
                      ", R_outer=" + std::to_string(R_outer) + ")");
  }
  RadialGrid g;
  const auto n = static_cast<std::size_t>(cells);
  const double h = R_outer / static_cast<double>(n);
  g.R_outer = R_outer;
  g.nodes.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.nodes[i] = h * static_cast<double>(i);
  g.nodes[n] = R_outer;
  g.spacing.assign(n, h);
  g.quad_weights.assign(n + 1, h);
  g.quad_weights.front() = 0.5 * h;
  g.quad_weights.back() = 0.5 * h;
  return g;
}

double integrate(std::span<const double> samples, const RadialGrid& grid, Weight weight) {
  if (samples.size() != grid.size()) {
    throw ConfigError("integrate: " + std::to_string(samples.size()) + " samples for " +
                      std::to_string(grid.size()) + " nodes");
  }
  double sum = 0.0;
  if (weight == Weight::Plain) {
    for (std::size_t i = 0; i < samples.size(); ++i) sum += grid.quad_weights[i] * samples[i];
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i)
      sum += grid.quad_weights[i] * samples[i] * grid.nodes[i];
  }
  return sum;
}

double interpolate(std::span<const double> samples, const RadialGrid& grid, double r) {
  const std::size_t n = grid.cells();
  if (r <= 0.0) return samples[0];
  if (r >= grid.R_outer) return samples[n];
  const double h = grid.dr();
  auto k = static_cast<std::size_t>(r / h);
  k = std::min(k, n - 1);
  const double theta = (r - grid.nodes[k]) / (grid.nodes[k + 1] - grid.nodes[k]);
  return (1.0 - theta) * samples[k] + theta * samples[k + 1];
}

PartialRule partial_rule(const RadialGrid& grid, double R) {
  PartialRule rule;
  const std::size_t n = grid.cells();
  R = std::clamp(R, 0.0, grid.R_outer);
  const double h = grid.dr();
  auto k = static_cast<std::size_t>(std::floor(R / h));
  k = std::min(k, n);
  // Snap to the node when R sits on it to round-off.
  if (k < n && std::abs(grid.nodes[k + 1] - R) <= 1e-12 * grid.R_outer) ++k;
  rule.last_node = k;
  rule.points.assign(grid.nodes.begin(), grid.nodes.begin() + static_cast<long>(k) + 1);
  rule.weights.assign(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    rule.weights[i] += 0.5 * h;
    rule.weights[i + 1] += 0.5 * h;
  }
  const double tail = R - grid.nodes[k];
  if (tail > 1e-12 * grid.R_outer) {
    rule.points.push_back(R);
    rule.weights.back() += 0.5 * tail;
    rule.weights.push_back(0.5 * tail);
  }
  return rule;
}

std::vector<double> PartialRule::sample(std::span<const double> nodal,
                                        const RadialGrid& grid) const {
  std::vector<double> out(nodal.begin(), nodal.begin() + static_cast<long>(last_node) + 1);
  if (points.size() > last_node + 1) out.push_back(interpolate(nodal, grid, points.back()));
  return out;
}

double PartialRule::apply(std::span<const double> values) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * values[i];
  return sum;
}

}  // namespace mhdlab
