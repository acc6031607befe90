#include "mhdlab/diagnostics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "mhdlab/errors.hpp"
#include "mhdlab/kernels.hpp"

namespace mhdlab {

namespace {

// Nodal radial derivative: central inside, one-sided second order at both ends.
std::vector<double> derivative(std::span<const double> q, double h) {
  const std::size_t n = q.size(), last = n - 1;
  std::vector<double> d(n);
  d[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
  for (std::size_t i = 1; i < last; ++i) d[i] = (q[i + 1] - q[i - 1]) / (2.0 * h);
  d[last] = (3.0 * q[last] - 4.0 * q[last - 1] + q[last - 2]) / (2.0 * h);
  return d;
}

// Odd field vanishing on the axis: u_r(0) = u_1 / h to the order of the scheme.
std::vector<double> odd_derivative(std::span<const double> q, double h) {
  std::vector<double> d = derivative(q, h);
  d[0] = q[1] / h;
  return d;
}

// Integral of f_h g_h r^beta over the span of x, where f_h, g_h are the
// piecewise-linear interpolants of the samples (g_h = 1 when g is empty). The
// weight is integrated exactly: closed form on a cell touching the axis, where
// r^beta is not smooth, and 10-point Gauss-Legendre elsewhere.
double power_integral(std::span<const double> x, std::span<const double> f,
                      std::span<const double> g, double beta) {
  static const auto gauss = [] {
    // 10-point Gauss-Legendre on [0, 1] by Newton on P_10
    std::array<std::pair<double, double>, 10> q{};
    const int n = 10;
    for (int k = 0; k < n; ++k) {
      double x = std::cos(M_PI * (k + 0.75) / (n + 0.5)), dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= n; ++m) {
          const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      q[k] = {0.5 * (1.0 - x), 1.0 / ((1.0 - x * x) * dp * dp)};
    }
    return q;
  }();
  const bool linear = g.empty();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double x0 = x[k], h = x[k + 1] - x0;
    if (!(h > 0.0)) continue;
    const double f0 = f[k], f1 = f[k + 1];
    const double g0 = linear ? 1.0 : g[k], g1 = linear ? 1.0 : g[k + 1];
    // basis products (1-s)^2, s(1-s), s^2 against the weight, s = (r - x0) / h
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    if (x0 == 0.0) {
      const double c = std::pow(h, beta), a1 = 1.0 / (beta + 1.0), a2 = 1.0 / (beta + 2.0),
                   a3 = 1.0 / (beta + 3.0);
      m00 = c * (a1 - 2.0 * a2 + a3);
      m01 = c * (a2 - a3);
      m11 = c * a3;
      if (linear) {  // (1-s) and s alone
        m00 = c * (a1 - a2);
        m11 = c * a2;
      }
    } else {
      for (int j = 0; j < 10; ++j) {
        const auto [sj, wj] = gauss[j];
        const double wt = wj * std::pow(x0 + h * sj, beta);
        if (linear) {
          m00 += wt * (1.0 - sj);
          m11 += wt * sj;
        } else {
          m00 += wt * (1.0 - sj) * (1.0 - sj);
          m01 += wt * sj * (1.0 - sj);
          m11 += wt * sj * sj;
        }
      }
    }
    const double cell = linear ? f0 * m00 + f1 * m11
                               : f0 * g0 * m00 + (f0 * g1 + f1 * g0) * m01 + f1 * g1 * m11;
    total += h * cell;
  }
  return total;
}

}  // namespace

double total_energy(const FluidState& s, const RadialGrid& grid, const PhysParams& p) {
  const std::size_t n = s.size();
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    double kin = s.u[i] * s.u[i];
    if (s.has_swirl()) kin += s.v[i] * s.v[i] + s.w[i] * s.w[i];
    e[i] = 0.5 * s.rho[i] * kin + s.P[i] / (p.gamma - 1.0) + 0.5 * s.B[i] * s.B[i];
  }
  return integrate(e, grid, Weight::RadialR);
}

std::vector<double> nodal_divergence(std::span<const double> u, const RadialGrid& grid) {
  std::vector<double> d(u.size());
  kernels::divergence(u, grid.nodes, grid.dr(), d);
  return d;
}

double dissipation_rate(const FluidState& s, const RadialGrid& grid, const PhysParams& p) {
  const std::size_t n = s.size();
  if (!s.has_swirl()) {
    const std::vector<double> d = nodal_divergence(s.u, grid);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = d[i] * d[i];
    return p.nu() * integrate(sq, grid, Weight::RadialR);
  }
  const double h = grid.dr();
  const auto ur = odd_derivative(s.u, h);
  const auto vr = odd_derivative(s.v, h);
  std::vector<double> wr = derivative(s.w, h);
  wr[0] = 0.0;  // w is even about the axis
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = grid.nodes[i];
    f[i] = p.nu() * (r * ur[i] * ur[i] + s.u[i] * s.u[i] / r) +
           p.mu * (r * vr[i] * vr[i] + s.v[i] * s.v[i] / r) + p.mu * r * wr[i] * wr[i];
  }
  return integrate(f, grid, Weight::Plain);
}

double cumulative_dissipation(std::span<const DiagnosticsRecord> h) {
  double sum = 0.0;
  for (std::size_t k = 1; k < h.size(); ++k)
    sum += 0.5 * (h[k].t - h[k - 1].t) * (h[k].dissipation + h[k - 1].dissipation);
  return sum;
}

EnergyResidual energy_residual(std::span<const DiagnosticsRecord> h) {
  if (h.size() < 2) throw ConfigError("energy_residual needs at least two records");
  EnergyResidual r;
  const double E0 = h.front().energy;
  if (E0 == 0.0) return r;
  for (const auto& rec : h) {
    const double excess = (rec.energy + rec.dissipation_cum - E0) / E0;
    r.absolute = std::max(r.absolute, std::abs(excess));
    r.creation = std::max(r.creation, excess);
  }
  return r;
}

double div_norm(const FluidState& s, const RadialGrid& grid) {
  const std::vector<double> d = nodal_divergence(s.u, grid);
  std::vector<double> sq(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) sq[i] = d[i] * d[i];
  return std::sqrt(integrate(sq, grid, Weight::RadialR));
}

double moment_coefficient(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream os;
    os << "moment coefficient needs 1 < alpha < 2, got " << alpha;
    throw DomainError(os.str());
  }
  return alpha / std::sqrt(2.0 * alpha - 2.0) + (alpha + 1.0) / std::sqrt(2.0 * alpha);
}

MomentPair moment_pair(const FluidState& s, const VacuumFront& front, const RadialGrid& grid,
                       const PhysParams& p, double alpha) {
  const double R = front.R;
  const PartialRule rule = partial_rule(grid, R);
  const auto div = rule.sample(nodal_divergence(s.u, grid), grid);
  const auto B = rule.sample(s.B, grid);
  const auto& x = rule.points;
  const double b2a1 = power_integral(x, B, B, alpha - 1.0);
  MomentPair m;
  m.lhs = -p.nu() * (alpha * R * power_integral(x, div, {}, alpha - 1.0) -
                     (alpha + 1.0) * power_integral(x, div, {}, alpha));
  m.rhs = (1.0 - 0.5 * alpha) * R * b2a1 + 0.5 * (alpha - 1.0) * power_integral(x, B, B, alpha);
  m.rhs_floor = 0.5 * (2.0 - alpha) * R * b2a1;
  return m;
}

double moment_unintegrated(std::span<const double> u, const RadialGrid& grid, double R,
                           double alpha) {
  const PartialRule rule = partial_rule(grid, R);
  const auto dd = rule.sample(derivative(nodal_divergence(u, grid), grid.dr()), grid);
  return R * power_integral(rule.points, dd, {}, alpha) -
         power_integral(rule.points, dd, {}, alpha + 1.0);
}

double moment_lhs_cap(const FluidState& s, const RadialGrid& grid, const PhysParams& p, double R,
                      double alpha) {
  return p.nu() * moment_coefficient(alpha) * std::pow(R, alpha) * div_norm(s, grid);
}

double cauchy_schwarz_gap(const FluidState& s, const VacuumFront& front, const RadialGrid& grid,
                          double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("cauchy_schwarz_gap needs 1 < alpha < 2");
  const double R = front.R;
  const PartialRule rule = partial_rule(grid, R);
  const auto B = rule.sample(s.B, grid);
  const double flux = power_integral(rule.points, B, {}, 0.0);
  return power_integral(rule.points, B, B, alpha - 1.0) * std::pow(R, 2.0 - alpha) / (2.0 - alpha) -
         flux * flux;
}

}  // namespace mhdlab
