#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <random>

#include "mhdlab/errors.hpp"
#include "mhdlab/grid.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/mms.hpp"
#include "mhdlab/solver.hpp"

using namespace mhdlab;

namespace {

FluidState uniform(const RadialGrid& g, bool swirl, double rho, double P) {
  FluidState s = FluidState::zeros(g.size(), swirl);
  std::fill(s.rho.begin(), s.rho.end(), rho);
  std::fill(s.P.begin(), s.P.end(), P);
  return s;
}

double l2(const std::vector<double>& f, const RadialGrid& g) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(integrate(sq, g, Weight::RadialR));
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double bump(double r, double lo, double hi) {
  if (r <= lo || r >= hi) return 0.0;
  const double x = (r - lo) / (hi - lo);
  return std::pow(std::sin(M_PI * x), 4);
}

// Smooth state with a vacuum core, magnetic field and swirl, for kernel checks.
FluidState rough_state(const RadialGrid& g, bool swirl, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  FluidState s = FluidState::zeros(g.size(), swirl);
  const double core = 0.3 + 0.1 * U(rng);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes[i];
    s.rho[i] = r < core ? 0.0 : std::min(1.0, 4.0 * (r - core)) * (1.0 + 0.2 * std::sin(9 * r));
    s.P[i] = s.rho[i] * (0.5 + 0.1 * std::cos(5 * r));
    s.u[i] = 0.3 * std::sin(M_PI * r) * (1.0 + 0.05 * U(rng));
    s.B[i] = r * (1.0 - r) * (1.0 + 0.05 * U(rng));
    if (swirl) {
      s.v[i] = 0.2 * r * (1.0 - r) * (1.0 + 0.05 * U(rng));
      s.w[i] = 0.1 * std::cos(2 * r) * (1.0 + 0.05 * U(rng));
    }
  }
  pin_boundaries(s, swirl ? Geometry::Cylinder3D : Geometry::Disk2D);
  return s;
}

kernels::Input input_for(const RadialGrid& g, const FluidState& s, const PhysParams& p) {
  kernels::Input in;
  in.r = g.nodes;
  in.dr = g.dr();
  in.state = &s;
  in.phys = &p;
  in.eps_vac = 1e-4;
  return in;
}

}  // namespace

TEST_CASE("rhs: uniform rest state has zero tendency") {
  const RadialGrid g = make_grid(40, 1.0);
  PhysParams p;
  SolverSettings s;
  for (double c : {0.0, 0.7, 3.0}) {
    const Tendency t = rhs_disk(uniform(g, false, 1.0, c), p, g, s);
    for (const auto* f : {&t.rho, &t.u, &t.P, &t.B})
      for (double x : *f) CHECK(x == 0.0);
    p.geometry = Geometry::Cylinder3D;
    const Tendency tc = rhs_cylinder(uniform(g, true, 1.0, c), p, g, s);
    for (const auto* f : {&tc.rho, &tc.u, &tc.P, &tc.B, &tc.v, &tc.w})
      for (double x : *f) CHECK(x == 0.0);
    p.geometry = Geometry::Disk2D;
  }
}

TEST_CASE("rhs_disk: linear velocity compresses at rate 2c") {
  const RadialGrid g = make_grid(50, 1.0);
  PhysParams p;
  const double c = 0.3;
  FluidState s = uniform(g, false, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = c * g.nodes[i];
  pin_boundaries(s, Geometry::Disk2D);
  const Tendency t = rhs_disk(s, p, g, SolverSettings{});
  for (std::size_t i = 1; i + 3 < g.size(); ++i) CHECK(t.rho[i] == doctest::Approx(-2.0 * c).epsilon(1e-12));
  for (double x : t.P) CHECK(x == 0.0);
}

TEST_CASE("rhs_disk: Lorentz force of B = r") {
  const RadialGrid g = make_grid(50, 1.0);
  PhysParams p;
  FluidState s = uniform(g, false, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.B[i] = g.nodes[i];
  const Tendency t = rhs_disk(s, p, g, SolverSettings{});
  // node 1 carries the flux-conserving axis closure and is checked separately
  for (std::size_t i = 2; i + 1 < g.size(); ++i)
    CHECK(t.u[i] == doctest::Approx(-2.0 * g.nodes[i]).epsilon(1e-12));
  CHECK(t.u[0] == 0.0);
  CHECK(t.u.back() == 0.0);
  const double h = g.dr();
  CHECK(t.u[1] == doctest::Approx(-1.5 * h).epsilon(1e-12));
}

TEST_CASE("rhs_cylinder: centrifugal and axial diffusion examples") {
  const RadialGrid g = make_grid(50, 1.0);
  PhysParams p;
  p.geometry = Geometry::Cylinder3D;
  p.mu = 0.7;
  FluidState s = uniform(g, true, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.v[i] = g.nodes[i];
  pin_boundaries(s, Geometry::Cylinder3D);
  const Tendency t = rhs_cylinder(s, p, g, SolverSettings{});
  for (std::size_t i = 1; i + 2 < g.size(); ++i) CHECK(t.u[i] == doctest::Approx(g.nodes[i]).epsilon(1e-12));

  FluidState w = uniform(g, true, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) w.w[i] = g.nodes[i] * g.nodes[i];
  const Tendency tw = rhs_cylinder(w, p, g, SolverSettings{});
  for (std::size_t i = 0; i + 1 < g.size(); ++i) CHECK(tw.w[i] == doctest::Approx(4.0 * p.mu).epsilon(1e-10));
}

TEST_CASE("rhs_disk: second-order agreement with analytic tendencies") {
  PhysParams p;
  p.mu = 0.2;
  p.lam = 0.1;
  p.gamma = 1.6;
  const double a = 0.3, b = 0.5, c = 0.2, d = 0.4, nu = p.nu();
  double prev[4] = {0, 0, 0, 0};
  for (long N : {64L, 128L, 256L, 512L}) {
    const RadialGrid g = make_grid(N, 1.0);
    FluidState s = FluidState::zeros(g.size(), false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes[i];
      s.rho[i] = 1 + a * r * r;
      s.u[i] = c * (r - r * r * r);
      s.P[i] = 1 + b * r * r;
      s.B[i] = d * (r - 0.5 * r * r);
    }
    const Tendency t = rhs_disk(s, p, g, SolverSettings{});
    double err[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.nodes[i];
      if (r < 0.1 || r > 0.9) continue;
      const double rho = 1 + a * r * r, rho_r = 2 * a * r;
      const double u = c * (r - r * r * r), u_r = c * (1 - 3 * r * r);
      const double div = c * (2 - 4 * r * r), div_r = -8 * c * r;
      const double P = 1 + b * r * r, P_r = 2 * b * r;
      const double B = d * (r - 0.5 * r * r), B_r = d * (1 - r);
      const double rho_t = -rho_r * u - rho * div;
      const double u_t = (-rho * u * u_r - P_r + nu * div_r - B * (B_r + B / r)) / rho;
      const double P_t = -u * P_r - p.gamma * P * div;
      const double B_t = -(u_r * B + u * B_r);
      err[0] = std::max(err[0], std::abs(t.rho[i] - rho_t));
      err[1] = std::max(err[1], std::abs(t.u[i] - u_t));
      err[2] = std::max(err[2], std::abs(t.P[i] - P_t));
      err[3] = std::max(err[3], std::abs(t.B[i] - B_t));
    }
    if (prev[0] > 0) {
      for (int k = 0; k < 4; ++k) {
        INFO("field " << k << " N " << N << " err " << err[k]);
        CHECK(std::log2(prev[k] / err[k]) >= 1.8);
      }
    }
    std::copy(err, err + 4, prev);
  }
}

TEST_CASE("rhs: non-finite input names the node") {
  const RadialGrid g = make_grid(20, 1.0);
  FluidState s = uniform(g, false, 1.0, 1.0);
  s.P[7] = std::numeric_limits<double>::quiet_NaN();
  try {
    rhs_disk(s, PhysParams{}, g, SolverSettings{});
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(e.node() == 7);
  }
}

TEST_CASE("cfl_dt examples") {
  const RadialGrid g = make_grid(100, 1.0);
  PhysParams p;  // mu = 1, lambda = 0
  SolverSettings s;
  s.cfl = 0.4;
  s.scheme = Scheme::SSPRK3_ExplicitViscous;
  const FluidState q = uniform(g, false, 1.0, 0.0);
  CHECK(cfl_dt(q, g, p, s) == doctest::Approx(1e-5).epsilon(1e-12));

  s.scheme = Scheme::RK2_ImplicitViscous;
  const FluidState w1 = uniform(g, false, 1.0, 1.0);
  const RadialGrid g2 = make_grid(100, 2.0);
  const FluidState w2 = uniform(g2, false, 1.0, 1.0);
  CHECK(cfl_dt(w2, g2, p, s) / cfl_dt(w1, g, p, s) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cfl_dt(w1, g, p, s) == doctest::Approx(0.4 * 0.01 / std::sqrt(1.4)).epsilon(1e-12));

  FluidState bad = w1;
  bad.u[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfl_dt(bad, g, p, s), NumericalFailure);
}

TEST_CASE("step: quiescent states are exact fixed points") {
  const RadialGrid g = make_grid(64, 1.0);
  for (Scheme sch : {Scheme::SSPRK3_ExplicitViscous, Scheme::RK2_ImplicitViscous}) {
    for (bool swirl : {false, true}) {
      PhysParams p;
      p.geometry = swirl ? Geometry::Cylinder3D : Geometry::Disk2D;
      SolverSettings s;
      s.scheme = sch;
      FluidState q = uniform(g, swirl, 1.3, 0.8);
      q.t = 0.25;
      const FluidState n = step(q, 1e-3, p, g, s);
      CHECK(n.t == doctest::Approx(0.251).epsilon(1e-15));
      CHECK(n.rho == q.rho);
      CHECK(n.u == q.u);
      CHECK(n.P == q.P);
      CHECK(n.B == q.B);
      CHECK(n.v == q.v);
      CHECK(n.w == q.w);
    }
  }
}

TEST_CASE("step: viscous decay of a velocity bump") {
  const RadialGrid g = make_grid(64, 1.0);
  PhysParams p;
  p.mu = 0.05;
  FluidState s0 = uniform(g, false, 1.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s0.u[i] = 1e-3 * bump(g.nodes[i], 0.1, 0.9);
  for (Scheme sch : {Scheme::SSPRK3_ExplicitViscous, Scheme::RK2_ImplicitViscous}) {
    SolverSettings s;
    s.scheme = sch;
    FluidState st = s0;
    double norm = l2(st.u, g);
    const double dt = std::min(cfl_dt(st, g, p, s), 2e-3);
    for (int k = 0; k < 20; ++k) {
      st = step(st, dt, p, g, s);
      const double next = l2(st.u, g);
      CHECK(next <= norm);
      norm = next;
    }
  }
  // one step against an explicit integration at dt / 100
  SolverSettings imp, exp;
  exp.scheme = Scheme::SSPRK3_ExplicitViscous;
  const double dt = 2e-4;
  const FluidState big = step(s0, dt, p, g, imp);
  FluidState ref = s0;
  for (int k = 0; k < 100; ++k) ref = step(ref, dt / 100, p, g, exp);
  const double change = max_diff(ref.u, s0.u);
  CHECK(max_diff(big.u, ref.u) < 1e-3 * change);
}

TEST_CASE("step: SSPRK3 local error is third order in dt") {
  ManufacturedSolution m;
  m.phys.mu = 0.05;
  const RadialGrid g = make_grid(64, 1.0);
  SolverSettings s;
  s.scheme = Scheme::SSPRK3_ExplicitViscous;
  const Forcing f = m.forcing();
  const FluidState x0 = m.exact(g, 0.0);
  auto local = [&](double dt) {
    const FluidState one = step(x0, dt, m.phys, g, s, nullptr, &f);
    FluidState ref = x0;
    for (int k = 0; k < 64; ++k) ref = step(ref, dt / 64, m.phys, g, s, nullptr, &f);
    return std::max({max_diff(one.rho, ref.rho), max_diff(one.u, ref.u), max_diff(one.P, ref.P),
                     max_diff(one.B, ref.B)});
  };
  const double e1 = local(4e-4), e2 = local(2e-4), e3 = local(1e-4);
  INFO(e1 << " " << e2 << " " << e3);
  CHECK(std::log2(e1 / e2) >= 2.8);
  CHECK(std::log2(e2 / e3) >= 2.8);
}

TEST_CASE("step: pins hold at every stage evaluation") {
  const RadialGrid g = make_grid(128, 1.0);
  for (Scheme sch : {Scheme::SSPRK3_ExplicitViscous, Scheme::RK2_ImplicitViscous}) {
    PhysParams p;
    p.geometry = Geometry::Cylinder3D;
    p.mu = 0.05;
    SolverSettings s;
    s.scheme = sch;
    FluidState st = rough_state(g, true, 3);
    enforce_closure(st, g.nodes, g.dr(), p, s, false);
    for (int k = 0; k < 10; ++k) {
      TransportPlan plan;
      const double dt = cfl_dt(st, g, p, s);
      st = advance(st, 1.0, false, dt, p, s, nullptr, nullptr, &plan).state;
      CHECK(plan.seen.size() == (sch == Scheme::SSPRK3_ExplicitViscous ? 3u : 2u));
      for (const auto& u : plan.seen) {
        CHECK(u.front() == 0.0);
        CHECK(u.back() == 0.0);
      }
      CHECK(st.u.front() == 0.0);
      CHECK(st.B.front() == 0.0);
      CHECK(st.v.front() == 0.0);
      CHECK(st.w.back() == 0.0);
      for (std::size_t i = 0; i < st.size(); ++i) {
        CHECK(st.rho[i] >= 0.0);
        CHECK(st.P[i] >= 0.0);
      }
    }
  }
}

TEST_CASE("step: mass is conserved on a fixed domain") {
  const RadialGrid g = make_grid(256, 1.0);
  PhysParams p;
  p.mu = 0.01;
  for (Scheme sch : {Scheme::SSPRK3_ExplicitViscous, Scheme::RK2_ImplicitViscous}) {
    SolverSettings s;
    s.scheme = sch;
    FluidState st = rough_state(g, false, 5);
    enforce_closure(st, g.nodes, g.dr(), p, s, false);
    const double m0 = integrate(st.rho, g, Weight::RadialR);
    double clipped = 0.0;
    for (int k = 0; k < 200; ++k) {
      StepLog log;
      st = step(st, cfl_dt(st, g, p, s), p, g, s, &log);
      clipped += log.clipped_mass;
    }
    const double m1 = integrate(st.rho, g, Weight::RadialR);
    CHECK(std::abs(m1 + clipped - m0) / m0 <= 1e-6);
    CHECK(clipped / m0 < 1e-6);
  }
}

TEST_CASE("project_vacuum solves the discrete balance on vacuum nodes") {
  const RadialGrid g = make_grid(200, 1.0);
  PhysParams p;
  p.mu = 0.3;
  SolverSettings s;
  FluidState st = rough_state(g, false, 9);
  const std::size_t count = project_vacuum(st, g.nodes, g.dr(), p, s);
  std::size_t expect = 0;
  for (double rho : st.rho) expect += rho < s.eps_vac ? 1 : 0;
  CHECK(count == expect);
  REQUIRE(count > 10);
  const double h = g.dr();
  const auto& r = g.nodes;
  const auto& u = st.u;
  CHECK(u[0] == 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    if (!(st.rho[i] < s.eps_vac)) continue;
    // nu d/dr [ (r u)_r / r ] with face radii
    const double rp = 0.5 * (r[i] + r[i + 1]), rm = 0.5 * (r[i] + r[i - 1]);
    const double Dp = (r[i + 1] * u[i + 1] - r[i] * u[i]) / (h * rp);
    const double Dm = (r[i] * u[i] - r[i - 1] * u[i - 1]) / (h * rm);
    const double visc = p.nu() * (Dp - Dm) / h;
    const double force = (st.P[i + 1] - st.P[i - 1]) / (2 * h) + kernels::lorentz(st.B, r, i, h);
    CHECK(std::abs(visc - force) <= 1e-9 * (std::abs(force) + 1e-3));
  }
}

TEST_CASE("step rejects a non-finite dt") {
  const RadialGrid g = make_grid(16, 1.0);
  const FluidState q = uniform(g, false, 1.0, 1.0);
  CHECK_THROWS_AS(step(q, std::numeric_limits<double>::infinity(), PhysParams{}, g, SolverSettings{}),
                  ConfigError);
  CHECK_THROWS_AS(step(q, 0.0, PhysParams{}, g, SolverSettings{}), ConfigError);
}

TEST_CASE("detect_blowup") {
  const RadialGrid g = make_grid(64, 1.0);
  SolverSettings s;
  FluidState q = uniform(g, false, 1.0, 1.0);
  CHECK(detect_blowup(q, g, s, 1e-3).health == Health::Healthy);

  FluidState steep = q;
  steep.u[20] = 4.0 * s.blowup_gradu_max * g.dr();
  const BlowupCheck c = detect_blowup(steep, g, s, 1e-3);
  CHECK(c.health == Health::Suspected);
  CHECK(c.max_gradu > s.blowup_gradu_max);

  const BlowupCheck d = detect_blowup(q, g, s, 0.5 * s.dt_min);
  CHECK(d.health == Health::Suspected);
  CHECK(d.reason.find("dt") != std::string::npos);

  FluidState nan = q;
  nan.B[4] = std::numeric_limits<double>::quiet_NaN();
  CHECK(detect_blowup(nan, g, s).health == Health::Suspected);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  for (bool swirl : {false, true}) {
    for (long N : {16L, 100L, 777L}) {
      const RadialGrid g = make_grid(N, 1.0);
      PhysParams p;
      p.geometry = swirl ? Geometry::Cylinder3D : Geometry::Disk2D;
      p.mu = 0.02;
      const FluidState st = rough_state(g, swirl, static_cast<unsigned>(N));
      kernels::Input in = input_for(g, st, p);
      kernels::Parts a, b;
      kernels::evaluate(in, a);
      reference::evaluate(in, b);
      auto close = [](const std::vector<double>& x, const std::vector<double>& y) {
        REQUIRE(x.size() == y.size());
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        return max_diff(x, y) <= 1e-12 * (scale + 1.0);
      };
      CHECK(close(a.rho, b.rho));
      CHECK(close(a.P, b.P));
      CHECK(close(a.B, b.B));
      CHECK(close(a.fu, b.fu));
      CHECK(close(a.lu, b.lu));
      CHECK(close(a.div, b.div));
      if (swirl) {
        CHECK(close(a.fv, b.fv));
        CHECK(close(a.lv, b.lv));
        CHECK(close(a.fw, b.fw));
        CHECK(close(a.lw, b.lw));
      }
    }
  }
}

TEST_CASE("parallel kernels are bitwise independent of the thread count") {
  const RadialGrid g = make_grid(1000, 1.0);
  PhysParams p;
  p.geometry = Geometry::Cylinder3D;
  const FluidState st = rough_state(g, true, 1);
  const kernels::Input in = input_for(g, st, p);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  kernels::Parts base;
  kernels::evaluate(in, base);
  for (int threads : {2, 3, 7, 16}) {
    omp_set_num_threads(threads);
    kernels::Parts k;
    kernels::evaluate(in, k);
    CHECK(k.rho == base.rho);
    CHECK(k.P == base.P);
    CHECK(k.B == base.B);
    CHECK(k.fu == base.fu);
    CHECK(k.lu == base.lu);
    CHECK(k.fv == base.fv);
    CHECK(k.fw == base.fw);
    CHECK(k.lw == base.lw);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("whole steps are bitwise independent of the thread count") {
  const RadialGrid g = make_grid(300, 1.0);
  PhysParams p;
  p.mu = 0.01;
  SolverSettings s;
  const int saved = omp_get_max_threads();
  FluidState out[2];
  for (int k = 0; k < 2; ++k) {
    omp_set_num_threads(k == 0 ? 1 : 5);
    FluidState st = rough_state(g, false, 2);
    for (int n = 0; n < 25; ++n) st = step(st, cfl_dt(st, g, p, s), p, g, s);
    out[k] = st;
  }
  omp_set_num_threads(saved);
  CHECK(out[0].rho == out[1].rho);
  CHECK(out[0].u == out[1].u);
  CHECK(out[0].P == out[1].P);
  CHECK(out[0].B == out[1].B);
}

TEST_CASE("discrete 3D pointwise inequality on solver output") {
  const RadialGrid g = make_grid(200, 1.0);
  PhysParams p;
  p.geometry = Geometry::Cylinder3D;
  p.mu = 0.02;
  SolverSettings s;
  FluidState st = rough_state(g, true, 4);
  for (int n = 0; n < 20; ++n) st = step(st, cfl_dt(st, g, p, s), p, g, s);
  const double h = g.dr();
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double ur = (st.u[i + 1] - st.u[i - 1]) / (2 * h), q = st.u[i] / g.nodes[i];
    const double lhs = 2 * (ur * ur + q * q), rhs = (ur + q) * (ur + q);
    CHECK(lhs - rhs >= -1e-12 * std::max(lhs, 1e-300));
  }
}
