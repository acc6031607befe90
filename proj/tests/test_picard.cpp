#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mhdlab/errors.hpp"
#include "mhdlab/picard.hpp"
#include "mhdlab/solver.hpp"

using namespace mhdlab;

namespace {

// Gentle velocity bump in a weakly magnetised gas.
FluidState smooth(const RadialGrid& g) {
  FluidState s = FluidState::zeros(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes[i];
    s.rho[i] = 1.0;
    s.P[i] = 1.0;
    s.u[i] = r > 0.2 && r < 0.8 ? 0.05 * std::pow(std::sin(M_PI * (r - 0.2) / 0.6), 2) : 0.0;
    s.B[i] = 0.1 * r * (1.0 - r);
  }
  return s;
}

double sup_gap(const std::vector<FluidState>& a, const std::vector<FluidState>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t i = 0; i < a[k].size(); ++i) {
      m = std::max({m, std::abs(a[k].rho[i] - b[k].rho[i]), std::abs(a[k].u[i] - b[k].u[i]),
                    std::abs(a[k].P[i] - b[k].P[i]), std::abs(a[k].B[i] - b[k].B[i])});
    }
  }
  return m;
}

std::vector<FluidState> direct(const FluidState& s0, double dt, std::size_t steps, const PhysParams& p,
                               const RadialGrid& g, const SolverSettings& s) {
  std::vector<FluidState> out{s0};
  for (std::size_t k = 0; k < steps; ++k) out.push_back(step(out.back(), dt, p, g, s));
  return out;
}

}  // namespace

TEST_CASE("picard: quiescent state is a fixed point after one iteration") {
  const RadialGrid g = make_grid(64, 1.0);
  FluidState q = FluidState::zeros(g.size(), false);
  std::fill(q.rho.begin(), q.rho.end(), 1.0);
  std::fill(q.P.begin(), q.P.end(), 0.5);
  PhysParams p;
  p.mu = 0.05;
  const PicardResult res = picard_iterate(q, 0.01, 50, 1e-8, p, g, SolverSettings{});
  CHECK(res.report.converged);
  CHECK(res.report.iterations == 1);
  REQUIRE(res.trajectory.size() == res.report.steps + 1);
  for (const FluidState& s : res.trajectory) {
    CHECK(s.rho == q.rho);
    CHECK(s.u == q.u);
    CHECK(s.P == q.P);
    CHECK(s.B == q.B);
  }
  CHECK(res.trajectory.back().t == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("picard: contraction on smooth data") {
  const RadialGrid g = make_grid(256, 1.0);
  PhysParams p;
  p.mu = 0.05;
  for (Scheme sch : {Scheme::RK2_ImplicitViscous, Scheme::SSPRK3_ExplicitViscous}) {
    SolverSettings s;
    s.scheme = sch;
    const PicardResult res = picard_iterate(smooth(g), 0.01, 50, 1e-8, p, g, s);
    CHECK(res.report.converged);
    CHECK_FALSE(res.report.diverged);
    CHECK(res.report.iterations >= 2);
    CHECK(res.report.contraction_ratio < 1.0);
    for (std::size_t k = 1; k < res.report.phi.size(); ++k) CHECK(res.report.phi[k] < res.report.phi[k - 1]);
    CHECK(res.report.phi.back() < 1e-8);
    CHECK(res.report.dt * static_cast<double>(res.report.steps) == doctest::Approx(0.01).epsilon(1e-12));
  }
}

TEST_CASE("picard: gap to the nonlinear trajectory vanishes as tol decreases") {
  const RadialGrid g = make_grid(128, 1.0);
  PhysParams p;
  p.mu = 0.05;
  const SolverSettings s;
  const FluidState s0 = smooth(g);
  double prev = 1.0;
  for (double tol : {1e-5, 1e-8, 1e-11, 1e-14}) {
    const PicardResult res = picard_iterate(s0, 0.01, 50, tol, p, g, s);
    REQUIRE(res.report.converged);
    const auto ref = direct(s0, res.report.dt, res.report.steps, p, g, s);
    const double gap = sup_gap(res.trajectory, ref);
    INFO("tol " << tol << " gap " << gap);
    CHECK(gap <= prev);
    prev = gap;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("picard: iteration budget and argument checks") {
  const RadialGrid g = make_grid(64, 1.0);
  PhysParams p;
  p.mu = 0.05;
  const PicardResult one = picard_iterate(smooth(g), 0.01, 1, 1e-14, p, g, SolverSettings{});
  CHECK_FALSE(one.report.converged);
  CHECK(one.report.iterations == 1);
  CHECK_FALSE(one.report.message.empty());

  CHECK_THROWS_AS(picard_iterate(smooth(g), -1.0, 5, 1e-8, p, g, SolverSettings{}), ConfigError);
  CHECK_THROWS_AS(picard_iterate(smooth(g), 0.01, 0, 1e-8, p, g, SolverSettings{}), ConfigError);
  PhysParams f = p;
  f.geometry = Geometry::Disk2DFree;
  CHECK_THROWS_AS(picard_iterate(smooth(g), 0.01, 5, 1e-8, f, g, SolverSettings{}), ConfigError);
}
