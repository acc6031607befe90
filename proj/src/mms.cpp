#include "mhdlab/mms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mhdlab/errors.hpp"

namespace mhdlab {

FluidState ManufacturedSolution::exact(const RadialGrid& grid, double t) const {
  const double k = std::numbers::pi / R;
  const double E = A * std::exp(-t);
  FluidState s = FluidState::zeros(grid.size(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    s.rho[i] = 1.0 + E * std::cos(k * r);
    s.P[i] = 1.0 + E * std::cos(k * r);
    s.u[i] = E * std::sin(k * r) * r / R;
    s.B[i] = E * std::sin(k * r);
  }
  s.u.front() = 0.0;
  s.B.front() = 0.0;
  s.u.back() = 0.0;
  s.t = t;
  return s;
}

Forcing ManufacturedSolution::forcing() const {
  const double k = std::numbers::pi / R;
  const double A_ = A, R_ = R, gamma = phys.gamma, nu = phys.nu();
  // Density source at radius x for amplitude E.
  auto density_source = [=](double x, double E) {
    const double c = std::cos(k * x), s = std::sin(k * x);
    const double u = E * s * x / R_;
    const double div = E * (k * c * x + 2.0 * s) / R_;
    return -E * c - E * k * s * u + (1.0 + E * c) * div;
  };
  return [=](double t, std::span<const double> r, kernels::Parts& parts) {
    const double E = A_ * std::exp(-t);
    const std::size_t n = r.size();
    const std::size_t last = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = r[i];
      const double c = std::cos(k * x), s = std::sin(k * x);
      const double rho = 1.0 + E * c, P = rho;
      const double rho_r = -E * k * s, P_r = rho_r;
      const double u = E * s * x / R_;
      const double u_r = E * (k * c * x + s) / R_;
      const double div = E * (k * c * x + 2.0 * s) / R_;
      const double div_r = E * (3.0 * k * c - k * k * x * s) / R_;
      const double B = E * s, B_r = E * k * c;
      const double B_over_r = x > 0.0 ? B / x : E * k;
      const double S_P = -E * c + u * P_r + gamma * P * div;
      const double S_B = -B + u_r * B + u * B_r;
      const double S_u = rho * (-u + u * u_r) + P_r - nu * div_r + B * (B_r + B_over_r);
      parts.P[i] += S_P;
      if (i > 0) parts.B[i] += S_B;
      if (i > 0 && i < last) {
        parts.fu[i] += S_u;
        parts.rho[i] += density_source(x, E);
      }
    }
    // The end nodes carry half-cell averages of rho; average the source the same way.
    const double h = r[1] - r[0];
    auto half_cell_mean = [&](double lo, double hi) {
      static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
      static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      double num = 0.0, den = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[q];
        num += weights[q] * x * density_source(x, E);
        den += weights[q] * x;
      }
      return num / den;
    };
    parts.rho[0] += half_cell_mean(0.0, 0.5 * h);
    parts.rho[last] += half_cell_mean(r[last] - 0.5 * h, r[last]);
  };
}

double l2_error(std::span<const double> a, std::span<const double> b, const RadialGrid& grid) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(integrate(d, grid, Weight::RadialR));
}

FluidState solve_manufactured(const ScenarioConfig& cfg, long N, double t_end) {
  const ManufacturedSolution mms{cfg.mms_amplitude, cfg.R_outer, cfg.phys};
  const RadialGrid grid = make_grid(N, cfg.R_outer);
  const Forcing f = mms.forcing();
  FluidState s = mms.exact(grid, 0.0);
  for (long n = 0; s.t < t_end; ++n) {
    if (n >= cfg.max_steps) throw NumericalFailure("manufactured run exceeded time.max_steps");
    double dt = cfl_dt(s, grid, cfg.phys, cfg.solver);
    // Land exactly on t_end without a sliver step.
    const double left = t_end - s.t;
    if (dt >= left) dt = left;
    else if (dt > 0.5 * left) dt = 0.5 * left;
    const double t_target = s.t + dt;
    s = step(s, dt, cfg.phys, grid, cfg.solver, nullptr, &f);
    if (t_target == t_end) s.t = t_end;
  }
  return s;
}

std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                              std::span<const long> N_list) {
  const ManufacturedSolution mms{cfg.mms_amplitude, cfg.R_outer, cfg.phys};
  std::vector<ConvergenceRow> rows;
  for (const long N : N_list) {
    const RadialGrid grid = make_grid(N, cfg.R_outer);
    const FluidState num = solve_manufactured(cfg, N, cfg.t_end);
    const FluidState ex = mms.exact(grid, cfg.t_end);
    ConvergenceRow row;
    row.N = N;
    row.err_rho = l2_error(num.rho, ex.rho, grid);
    row.err_u = l2_error(num.u, ex.u, grid);
    row.err_P = l2_error(num.P, ex.P, grid);
    row.err_B = l2_error(num.B, ex.B, grid);
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double ratio = std::log(static_cast<double>(N) / static_cast<double>(prev.N));
      auto order = [&](double e0, double e1) -> std::optional<double> {
        if (e0 <= 0.0 || e1 <= 0.0) return std::nullopt;
        return std::log(e0 / e1) / ratio;
      };
      row.p_rho = order(prev.err_rho, row.err_rho);
      row.p_u = order(prev.err_u, row.err_u);
      row.p_P = order(prev.err_P, row.err_P);
      row.p_B = order(prev.err_B, row.err_B);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mhdlab
