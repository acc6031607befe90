#include "mhdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mhdlab/errors.hpp"
#include "mhdlab/tridiag.hpp"

namespace mhdlab {

namespace {

std::vector<double> scaled_nodes(double a, std::size_t n) {
  const std::size_t cells = n - 1;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = a * static_cast<double>(i) / static_cast<double>(cells);
  r[cells] = a;
  return r;
}

void require_finite(const FluidState& s) {
  auto scan = [](const std::vector<double>& f, const char* name) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!std::isfinite(f[i])) throw NumericalFailure(std::string("non-finite ") + name, static_cast<std::ptrdiff_t>(i));
    }
  };
  scan(s.rho, "rho");
  scan(s.u, "u");
  scan(s.P, "P");
  scan(s.B, "B");
  scan(s.v, "v");
  scan(s.w, "w");
  if (!std::isfinite(s.t)) throw NumericalFailure("non-finite time");
}

bool balanced(double rho, const SolverSettings& s) {
  return s.vacuum_strategy == VacuumStrategy::EllipticBalance && rho < s.eps_vac;
}

// Density dividing the momentum equation; 0 marks a quasi-static vacuum node.
double inertia(double rho, const SolverSettings& s) {
  if (s.vacuum_strategy == VacuumStrategy::DensityFloor) return std::max(rho, s.eps_vac);
  return rho < s.eps_vac ? 0.0 : rho;
}

struct Shape {
  std::vector<double> r;
  double h = 0.0;
};

Shape shape_of(double a, std::size_t n) {
  Shape g;
  g.r = scaled_nodes(a, n);
  g.h = a / static_cast<double>(n - 1);
  return g;
}

kernels::Parts evaluate(const FluidState& st, const Shape& g, const PhysParams& p,
                        const SolverSettings& s, bool free_surface, double grid_rate,
                        const Forcing* forcing, TransportPlan* plan = nullptr) {
  require_finite(st);
  kernels::Input in;
  in.r = g.r;
  in.dr = g.h;
  in.state = &st;
  in.phys = &p;
  in.eps_vac = s.eps_vac;
  in.free_surface = free_surface;
  in.grid_rate = grid_rate;
  if (plan) {
    const std::size_t j = plan->seen.size();
    if (plan->given) {
      if (j >= plan->given->size() || (*plan->given)[j].size() != st.size())
        throw ConfigError("transport plan does not match the stage count");
      in.transport = (*plan->given)[j];
    }
    plan->seen.push_back(st.u);
  }
  kernels::Parts parts;
  kernels::evaluate(in, parts);
  if (forcing) (*forcing)(st.t, g.r, parts);
  return parts;
}

// Velocity-like tendencies (f + l) / rho_eff, zero at balanced nodes.
void velocity_tendency(const FluidState& st, const kernels::Parts& k, const SolverSettings& s,
                       std::vector<double>& du, std::vector<double>& dv,
                       std::vector<double>& dw) {
  const std::size_t n = st.size();
  du.assign(n, 0.0);
  dv.assign(st.has_swirl() ? n : 0, 0.0);
  dw.assign(st.has_swirl() ? n : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = inertia(st.rho[i], s);
    if (m == 0.0) continue;
    if (i > 0 && i + 1 < n) du[i] = (k.fu[i] + k.lu[i]) / m;
    if (st.has_swirl()) {
      if (i > 0 && i + 1 < n) dv[i] = (k.fv[i] + k.lv[i]) / m;
      if (i + 1 < n) dw[i] = (k.fw[i] + k.lw[i]) / m;
    }
  }
}

enum class Component { U, V, W };

// Solves rho_eff x - theta c L x = rho_eff x_hat at fluid nodes and c L x = g
// at balanced nodes. theta = 0 turns fluid rows into x = x_hat.
void viscous_solve(Component comp, FluidState& st, const Shape& g, const PhysParams& p,
                   const SolverSettings& s, bool free_surface, double theta,
                   const std::vector<double>& x_hat) {
  const std::size_t n = st.size();
  const std::size_t last = n - 1;
  const double h = g.h;
  const auto& r = g.r;
  const double coef = comp == Component::U ? p.nu() : p.mu;
  const std::size_t first = comp == Component::W ? 0 : 1;
  const std::size_t rows = last - first;
  Tridiagonal sys(rows);

  for (std::size_t i = first; i < last; ++i) {
    const std::size_t k = i - first;
    double lo = 0.0, di = 0.0, up = 0.0;
    if (comp == Component::W) {
      if (i == 0) {
        di = -4.0 / (h * h);
        up = 4.0 / (h * h);
      } else {
        const double rp = 0.5 * (r[i] + r[i + 1]), rm = 0.5 * (r[i - 1] + r[i]);
        lo = rm / (r[i] * h * h);
        up = rp / (r[i] * h * h);
        di = -(rp + rm) / (r[i] * h * h);
      }
    } else {
      const double rp = 0.5 * (r[i] + r[i + 1]), rm = 0.5 * (r[i - 1] + r[i]);
      lo = r[i - 1] / (rm * h * h);
      up = r[i + 1] / (rp * h * h);
      di = -r[i] * (1.0 / rp + 1.0 / rm) / (h * h);
    }
    lo *= coef;
    di *= coef;
    up *= coef;
    const double m = inertia(st.rho[i], s);
    if (balanced(st.rho[i], s)) {
      double rhs = 0.0;
      if (comp == Component::U) {
        const double P_r = (st.P[i + 1] - st.P[i - 1]) / (2.0 * h);
        rhs = P_r + kernels::lorentz(st.B, r, i, h);
      }
      sys.lo[k] = lo;
      sys.di[k] = di;
      sys.up[k] = up;
      sys.rhs[k] = rhs;
    } else {
      sys.lo[k] = -theta * lo;
      sys.di[k] = m - theta * di;
      sys.up[k] = -theta * up;
      sys.rhs[k] = m * x_hat[i];
    }
  }
  sys.lo[0] = 0.0;  // axis value is pinned (u, v) or part of the system (w)

  std::vector<double>& x = comp == Component::U ? st.u : (comp == Component::V ? st.v : st.w);
  double sigma = 0.0, kappa = 0.0;
  const bool surface = comp == Component::U && free_surface;
  if (surface) {
    const double D = 3.0 / (2.0 * h) + 1.0 / r[last];
    sigma = (0.5 * st.B[last] * st.B[last] + st.P[last]) / p.nu() / D;
    kappa = 1.0 / (2.0 * h * D);
    const std::size_t k = rows - 1;
    const double U = sys.up[k];
    sys.rhs[k] -= U * sigma;
    sys.di[k] += 4.0 * kappa * U;
    sys.lo[k] -= kappa * U;
    sys.up[k] = 0.0;
  } else {
    sys.rhs[rows - 1] -= sys.up[rows - 1] * x[last];
    sys.up[rows - 1] = 0.0;
  }
  const std::vector<double> sol = sys.solve();
  for (std::size_t k = 0; k < rows; ++k) x[k + first] = sol[k];
  if (surface) x[last] = sigma + kappa * (4.0 * x[last - 1] - x[last - 2]);
}

void set_surface_velocity(FluidState& st, const Shape& g, const PhysParams& p) {
  const std::size_t last = st.size() - 1;
  const double h = g.h;
  const double D = 3.0 / (2.0 * h) + 1.0 / g.r[last];
  st.u[last] = ((0.5 * st.B[last] * st.B[last] + st.P[last]) / p.nu() +
                (4.0 * st.u[last - 1] - st.u[last - 2]) / (2.0 * h)) / D;
}

double relative_stress(const FluidState& st, const Shape& g, const PhysParams& p) {
  const std::size_t last = st.size() - 1;
  const double h = g.h;
  const double load = 0.5 * st.B[last] * st.B[last] + st.P[last];
  const double ur = (3.0 * st.u[last] - 4.0 * st.u[last - 1] + st.u[last - 2]) / (2.0 * h);
  const double scale = std::abs(load) + p.nu() * (std::abs(ur) + std::abs(st.u[last] / g.r[last]));
  const double F = surface_stress(st, g.r, h, p);
  return scale > 0.0 ? std::abs(F) / scale : 0.0;
}

void clip(FluidState& st, const Shape& g, StepLog* log) {
  const std::size_t n = st.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n ? 0.5 : 1.0) * g.h * g.r[i];
    if (st.rho[i] < 0.0) {
      if (log) log->clipped_mass += -st.rho[i] * w;
      st.rho[i] = 0.0;
    }
    if (st.P[i] < 0.0) {
      if (log) log->clipped_pressure += -st.P[i] * w;
      st.P[i] = 0.0;
    }
  }
}

// Boundary and vacuum closure applied after every stage of the explicit scheme.
void close_stage(FluidState& st, const Shape& g, const PhysParams& p, const SolverSettings& s,
                 bool free_surface, StepLog* log) {
  clip(st, g, log);
  pin_boundaries(st, free_surface ? Geometry::Disk2DFree : Geometry::Disk2D);
  if (st.has_swirl()) pin_boundaries(st, Geometry::Cylinder3D);
  bool any_vacuum = false;
  if (s.vacuum_strategy == VacuumStrategy::EllipticBalance) {
    for (double rho : st.rho) any_vacuum = any_vacuum || rho < s.eps_vac;
  }
  if (any_vacuum) {
    viscous_solve(Component::U, st, g, p, s, free_surface, 0.0, st.u);
    if (st.has_swirl()) {
      viscous_solve(Component::V, st, g, p, s, false, 0.0, st.v);
      viscous_solve(Component::W, st, g, p, s, false, 0.0, st.w);
    }
  } else if (free_surface) {
    set_surface_velocity(st, g, p);
  }
  if (free_surface && log) log->stress_residual = std::max(log->stress_residual, relative_stress(st, g, p));
}

struct Stage {
  FluidState st;
  double a = 0.0;
};

Advanced ssprk3(const FluidState& s0, double a0, bool free_surface, double dt,
                const PhysParams& p, const SolverSettings& s, StepLog* log,
                const Forcing* forcing, TransportPlan* plan) {
  const std::size_t n = s0.size();
  const std::size_t last = n - 1;

  // Returns base_w * base + w * (y + dt * T(y)).
  auto combine = [&](const Stage& base, double base_w, const Stage& y, double w, double t_new) {
    const Shape g = shape_of(y.a, n);
    const double rate = free_surface ? y.st.u[last] / y.a : 0.0;
    const kernels::Parts k = evaluate(y.st, g, p, s, free_surface, rate, forcing, plan);
    std::vector<double> du, dv, dw;
    velocity_tendency(y.st, k, s, du, dv, dw);
    Stage out;
    out.st = y.st;
    auto mix = [&](std::vector<double>& o, const std::vector<double>& b, const std::vector<double>& yv,
                   const std::vector<double>& d) {
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = base_w * b[i] + w * (yv[i] + dt * d[i]);
    };
    mix(out.st.rho, base.st.rho, y.st.rho, k.rho);
    mix(out.st.P, base.st.P, y.st.P, k.P);
    mix(out.st.B, base.st.B, y.st.B, k.B);
    mix(out.st.u, base.st.u, y.st.u, du);
    if (y.st.has_swirl()) {
      mix(out.st.v, base.st.v, y.st.v, dv);
      mix(out.st.w, base.st.w, y.st.w, dw);
    }
    const double adot = free_surface ? y.st.u[last] : 0.0;
    out.a = base_w * base.a + w * (y.a + dt * adot);
    if (!(out.a > 0.0)) throw NumericalFailure("outer radius collapsed");
    out.st.t = t_new;
    close_stage(out.st, shape_of(out.a, n), p, s, free_surface, log);
    return out;
  };

  const Stage y0{s0, a0};
  const Stage y1 = combine(y0, 0.0, y0, 1.0, s0.t + dt);
  const Stage y2 = combine(y0, 0.75, y1, 0.25, s0.t + 0.5 * dt);
  const Stage y3 = combine(y0, 1.0 / 3.0, y2, 2.0 / 3.0, s0.t + dt);
  return {y3.st, y3.a};
}

// IMEX ARS(2,2,2): explicit transport and forces, implicit viscous operators.
Advanced imex(const FluidState& s0, double a0, bool free_surface, double dt,
              const PhysParams& p, const SolverSettings& s, StepLog* log,
              const Forcing* forcing, TransportPlan* plan) {
  const double gam = 1.0 - 1.0 / std::sqrt(2.0);
  const double del = 1.0 - 1.0 / (2.0 * gam);
  const std::size_t n = s0.size();
  const std::size_t last = n - 1;
  const bool swirl = s0.has_swirl();

  struct Eval {
    kernels::Parts k;
    std::vector<double> fu, lu, fv, lv, fw, lw;  // divided by rho_eff, 0 at balanced nodes
    double adot = 0.0;
  };
  auto eval = [&](const Stage& y) {
    Eval e;
    const Shape g = shape_of(y.a, n);
    e.adot = free_surface ? y.st.u[last] : 0.0;
    e.k = evaluate(y.st, g, p, s, free_surface, e.adot / y.a, forcing, plan);
    auto per_mass = [&](const std::vector<double>& f, std::vector<double>& out) {
      out.assign(f.size(), 0.0);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double m = inertia(y.st.rho[i], s);
        if (m > 0.0) out[i] = f[i] / m;
      }
    };
    per_mass(e.k.fu, e.fu);
    per_mass(e.k.lu, e.lu);
    if (swirl) {
      per_mass(e.k.fv, e.fv);
      per_mass(e.k.lv, e.lv);
      per_mass(e.k.fw, e.fw);
      per_mass(e.k.lw, e.lw);
    }
    return e;
  };

  // Explicit weights wx over previous evaluations and implicit weights wi over
  // their viscous parts; `theta` is the diagonal implicit weight.
  auto stage = [&](const std::vector<const Eval*>& ev, const std::vector<double>& wx,
                   const std::vector<double>& wi, double t_new) {
    Stage y;
    y.st = s0;
    y.st.t = t_new;
    y.a = a0;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      const auto& k = ev[j]->k;
      for (std::size_t i = 0; i < n; ++i) {
        y.st.rho[i] += dt * wx[j] * k.rho[i];
        y.st.P[i] += dt * wx[j] * k.P[i];
        y.st.B[i] += dt * wx[j] * k.B[i];
      }
      y.a += dt * wx[j] * ev[j]->adot;
    }
    if (!(y.a > 0.0)) throw NumericalFailure("outer radius collapsed");
    const Shape g = shape_of(y.a, n);
    clip(y.st, g, log);
    pin_boundaries(y.st, free_surface ? Geometry::Disk2DFree : Geometry::Disk2D);

    auto estimate = [&](const std::vector<double>& x0, auto fsel, auto lsel) {
      std::vector<double> xh = x0;
      for (std::size_t j = 0; j < ev.size(); ++j) {
        const auto& f = fsel(*ev[j]);
        const auto& l = lsel(*ev[j]);
        for (std::size_t i = 0; i < n; ++i) xh[i] += dt * (wx[j] * f[i] + wi[j] * l[i]);
      }
      return xh;
    };
    const double theta = dt * gam;
    const auto uh = estimate(s0.u, [](const Eval& e) -> const auto& { return e.fu; },
                             [](const Eval& e) -> const auto& { return e.lu; });
    viscous_solve(Component::U, y.st, g, p, s, free_surface, theta, uh);
    if (swirl) {
      const auto vh = estimate(s0.v, [](const Eval& e) -> const auto& { return e.fv; },
                               [](const Eval& e) -> const auto& { return e.lv; });
      const auto wh = estimate(s0.w, [](const Eval& e) -> const auto& { return e.fw; },
                               [](const Eval& e) -> const auto& { return e.lw; });
      viscous_solve(Component::V, y.st, g, p, s, false, theta, vh);
      viscous_solve(Component::W, y.st, g, p, s, false, theta, wh);
      pin_boundaries(y.st, Geometry::Cylinder3D);
    }
    y.st.u.front() = 0.0;
    if (free_surface && log) log->stress_residual = std::max(log->stress_residual, relative_stress(y.st, g, p));
    return y;
  };

  const Stage y1{s0, a0};
  const Eval e1 = eval(y1);
  const Stage y2 = stage({&e1}, {gam}, {0.0}, s0.t + gam * dt);
  const Eval e2 = eval(y2);
  return [&] {
    const Stage y3 = stage({&e1, &e2}, {del, 1.0 - del}, {0.0, 1.0 - gam}, s0.t + dt);
    return Advanced{y3.st, y3.a};
  }();
}

}  // namespace

double surface_stress(const FluidState& st, std::span<const double> r, double dr,
                      const PhysParams& p) {
  const std::size_t last = st.size() - 1;
  const double ur = (3.0 * st.u[last] - 4.0 * st.u[last - 1] + st.u[last - 2]) / (2.0 * dr);
  return 0.5 * st.B[last] * st.B[last] + st.P[last] - p.nu() * (ur + st.u[last] / r[last]);
}

static Tendency rhs_common(const FluidState& st, const PhysParams& p, const RadialGrid& grid,
                           const SolverSettings& s) {
  if (st.size() != grid.size()) throw ConfigError("state and grid sizes differ");
  Shape g;
  g.r = grid.nodes;
  g.h = grid.dr();
  const kernels::Parts k = evaluate(st, g, p, s, false, 0.0, nullptr);
  Tendency t;
  t.rho = k.rho;
  t.P = k.P;
  t.B = k.B;
  velocity_tendency(st, k, s, t.u, t.v, t.w);
  return t;
}

Tendency rhs_disk(const FluidState& st, const PhysParams& p, const RadialGrid& grid,
                  const SolverSettings& s) {
  if (st.has_swirl()) throw ConfigError("rhs_disk: state carries swirl fields");
  return rhs_common(st, p, grid, s);
}

Tendency rhs_cylinder(const FluidState& st, const PhysParams& p, const RadialGrid& grid,
                      const SolverSettings& s) {
  if (!st.has_swirl()) throw ConfigError("rhs_cylinder: state lacks swirl fields");
  return rhs_common(st, p, grid, s);
}

double cfl_dt(const FluidState& st, const RadialGrid& grid, const PhysParams& p,
              const SolverSettings& s) {
  require_finite(st);
  const double h = grid.dr();
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (balanced(st.rho[i], s)) {
      const double speed = std::abs(st.u[i]);
      if (speed > 0.0) dt = std::min(dt, h / speed);
      continue;
    }
    const double m = std::max(st.rho[i], s.eps_vac);
    const double speed = std::abs(st.u[i]) + std::sqrt(p.gamma * std::max(st.P[i], 0.0) / m) +
                         std::sqrt(st.B[i] * st.B[i] / m);
    if (speed > 0.0) dt = std::min(dt, h / speed);
    if (s.scheme == Scheme::SSPRK3_ExplicitViscous) dt = std::min(dt, h * h * m / (2.0 * p.nu()));
  }
  return s.cfl * dt;
}

Advanced advance(const FluidState& state, double a, bool free_surface, double dt,
                 const PhysParams& p, const SolverSettings& s, StepLog* log,
                 const Forcing* forcing, TransportPlan* plan) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step needs a finite dt > 0");
  if (state.size() < 4) throw ConfigError("step needs at least 3 cells");
  Advanced out = s.scheme == Scheme::SSPRK3_ExplicitViscous
                     ? ssprk3(state, a, free_surface, dt, p, s, log, forcing, plan)
                     : imex(state, a, free_surface, dt, p, s, log, forcing, plan);
  out.state.t = state.t + dt;
  require_finite(out.state);
  const Geometry geom = state.has_swirl() ? Geometry::Cylinder3D
                                          : (free_surface ? Geometry::Disk2DFree : Geometry::Disk2D);
  if (const std::string bad = invariant_violation(out.state, geom); !bad.empty())
    throw NumericalFailure("post-step invariant violated: " + bad);
  return out;
}

FluidState step(const FluidState& state, double dt, const PhysParams& p, const RadialGrid& grid,
                const SolverSettings& s, StepLog* log, const Forcing* forcing) {
  if (state.size() != grid.size()) throw ConfigError("state and grid sizes differ");
  if (is_free(p.geometry)) throw ConfigError("step: use the free-boundary solver for disk2d-free");
  return advance(state, grid.R_outer, false, dt, p, s, log, forcing).state;
}

std::size_t project_vacuum(FluidState& st, std::span<const double> r, double dr,
                           const PhysParams& p, const SolverSettings& s) {
  std::size_t count = 0;
  if (s.vacuum_strategy == VacuumStrategy::EllipticBalance) {
    for (double rho : st.rho) count += rho < s.eps_vac ? 1 : 0;
  }
  if (count == 0) return 0;
  Shape g;
  g.r.assign(r.begin(), r.end());
  g.h = dr;
  const bool free_surface = is_free(p.geometry);
  viscous_solve(Component::U, st, g, p, s, free_surface, 0.0, st.u);
  if (st.has_swirl()) {
    viscous_solve(Component::V, st, g, p, s, false, 0.0, st.v);
    viscous_solve(Component::W, st, g, p, s, false, 0.0, st.w);
  }
  return count;
}

void enforce_closure(FluidState& st, std::span<const double> r, double dr, const PhysParams& p,
                     const SolverSettings& s, bool free_surface) {
  Shape g;
  g.r.assign(r.begin(), r.end());
  g.h = dr;
  close_stage(st, g, p, s, free_surface, nullptr);
}

double max_velocity_gradient(const FluidState& st, const RadialGrid& grid) {
  const std::size_t last = st.size() - 1;
  const double h = grid.dr();
  const auto& u = st.u;
  double m = std::abs(u[1] / h);  // u_r and u/r coincide on the axis
  for (std::size_t i = 1; i < last; ++i) {
    m = std::max({m, std::abs((u[i + 1] - u[i - 1]) / (2.0 * h)), std::abs(u[i] / grid.nodes[i])});
  }
  m = std::max({m, std::abs((3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * h)),
                std::abs(u[last] / grid.nodes[last])});
  return m;
}

BlowupCheck detect_blowup(const FluidState& st, const RadialGrid& grid, const SolverSettings& s,
                          double dt) {
  BlowupCheck c;
  try {
    require_finite(st);
  } catch (const NumericalFailure& e) {
    c.health = Health::Suspected;
    c.reason = e.what();
    c.max_gradu = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.max_gradu = max_velocity_gradient(st, grid);
  if (c.max_gradu > s.blowup_gradu_max) {
    c.health = Health::Suspected;
    c.reason = "velocity gradient " + std::to_string(c.max_gradu) + " above threshold";
  } else if (dt >= 0.0 && dt < s.dt_min) {
    c.health = Health::Suspected;
    c.reason = "dt collapse (" + std::to_string(dt) + ")";
  }
  return c;
}

}  // namespace mhdlab
