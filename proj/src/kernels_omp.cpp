#include <algorithm>
#include <cmath>

#include "mhdlab/kernels.hpp"

namespace mhdlab::kernels {

void Parts::resize(std::size_t n, bool swirl) {
  for (auto* f : {&rho, &P, &B, &fu, &lu, &div, &speed}) f->assign(n, 0.0);
  for (auto* f : {&fv, &lv, &fw, &lw}) f->assign(swirl ? n : 0, 0.0);
}

void divergence(std::span<const double> u, std::span<const double> r, double dr,
                std::span<double> out) {
  const std::size_t last = u.size() - 1;
  out[0] = 2.0 * u[1] / dr;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 1; i < last; ++i) {
    out[i] = (u[i + 1] - u[i - 1]) / (2.0 * dr) + u[i] / r[i];
  }
  out[last] = (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * dr) + u[last] / r[last];
}

namespace {

double jump_sensor(std::span<const double> q, std::size_t i, std::size_t last, double parity) {
  if (i == last) i = last - 1;
  const double qm = i == 0 ? parity * q[1] : q[i - 1];
  const double num = std::abs(q[i + 1] - 2.0 * q[i] + qm);
  const double den = std::abs(q[i + 1]) + 2.0 * std::abs(q[i]) + std::abs(qm);
  return den > 0.0 ? num / den : 0.0;
}

enum Field { kRho, kP, kB };

// Each transported field switches to first order on its own jumps only.
struct Face {
  double a = 0.0;
  double e2[3] = {0.0, 0.0, 0.0};
  bool has4 = false;
};

// q_{i-1} with the axis ghost q_{-1} = parity * q_1.
inline double below(std::span<const double> q, std::size_t i, double parity) {
  return i == 0 ? parity * q[1] : q[i - 1];
}

inline double dissipation(const Face& f, Field which, std::span<const double> q, std::size_t i,
                          double parity) {
  const double e2 = f.e2[which];
  const double e4 = std::max(0.0, k4 - e2);
  double d = e2 * (q[i + 1] - q[i]);
  if (f.has4) d -= e4 * (q[i + 2] - 3.0 * q[i + 1] + 3.0 * q[i] - below(q, i, parity));
  return f.a * d;
}

}  // namespace

void evaluate(const Input& in, Parts& out) {
  const FluidState& s = *in.state;
  const PhysParams& p = *in.phys;
  const std::size_t n = s.size();
  const std::size_t last = n - 1;
  const bool swirl = s.has_swirl();
  const double h = in.dr;
  const auto r = in.r;
  const double rate = in.grid_rate;
  const double nu = p.nu();
  out.resize(n, swirl);
  const std::span<const double> carry =
      in.transport.empty() ? std::span<const double>(s.u) : in.transport;

  std::vector<double> sr(n), sp(n), sb(n);
  std::vector<double> rel(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    rel[i] = carry[i] - r[i] * rate;
    out.speed[i] = std::abs(rel[i]);
    sr[i] = jump_sensor(s.rho, i, last, 1.0);
    sp[i] = jump_sensor(s.P, i, last, 1.0);
    sb[i] = jump_sensor(s.B, i, last, -1.0);
  }
  divergence(carry, r, h, out.div);

  auto face = [&](std::size_t i) {
    Face f;
    f.a = std::max(out.speed[i], out.speed[i + 1]);
    f.e2[kRho] = k2 * std::max(sr[i], sr[i + 1]);
    f.e2[kP] = k2 * std::max(sp[i], sp[i + 1]);
    f.e2[kB] = k2 * std::max(sb[i], sb[i + 1]);
    f.has4 = i + 2 <= last;
    return f;
  };
  // Mass flux through face i+1/2, weighted by its radius. rho * rel is
  // interpolated with a cubic (odd reflection on the axis) and with a quadratic
  // at the last face, so the half cell at the outer node stays second order.
  auto mass_at = [&](long j) {
    return j < 0 ? -s.rho[-j] * rel[-j] : s.rho[j] * rel[j];
  };
  auto mass_flux = [&](std::size_t i, const Face& f) {
    const double rf = 0.5 * (r[i] + r[i + 1]);
    const long j = static_cast<long>(i);
    const double m = i + 1 == last
                         ? (3.0 * mass_at(j + 1) + 6.0 * mass_at(j) - mass_at(j - 1)) / 8.0
                         : (-mass_at(j - 1) + 9.0 * mass_at(j) + 9.0 * mass_at(j + 1) -
                            mass_at(j + 2)) / 16.0;
    return rf * (m - dissipation(f, kRho, s.rho, i, 1.0));
  };
  auto field_flux = [&](std::size_t i, const Face& f) {
    return 0.5 * (s.B[i] * rel[i] + s.B[i + 1] * rel[i + 1]) - dissipation(f, kB, s.B, i, -1.0);
  };
  auto div_face = [&](std::span<const double> q, std::size_t i) {
    const double rf = 0.5 * (r[i] + r[i + 1]);
    return (r[i + 1] * q[i + 1] - r[i] * q[i]) / (rf * h);
  };

  const double vol0 = h * h / 8.0;
  const double volN = r[last] * h / 2.0 - h * h / 8.0;

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const Face right = i < last ? face(i) : Face{};
    const Face left = i > 0 ? face(i - 1) : Face{};

    if (i == 0) {
      out.rho[i] = -mass_flux(0, right) / vol0 - 2.0 * s.rho[i] * rate;
      out.P[i] = -p.gamma * s.P[i] * out.div[i] + 2.0 * dissipation(right, kP, s.P, 0, 1.0) / h;
      out.B[i] = 0.0;
      if (swirl) out.lw[i] = 4.0 * p.mu * (s.w[1] - s.w[0]) / (h * h);
      continue;
    }
    if (i == last) {
      out.rho[i] = mass_flux(i - 1, left) / volN - 2.0 * s.rho[i] * rate;
      out.P[i] = -p.gamma * s.P[i] * out.div[i] - 2.0 * dissipation(left, kP, s.P, i - 1, 1.0) / h;
      const double g0 = s.B[i] * rel[i], g1 = s.B[i - 1] * rel[i - 1], g2 = s.B[i - 2] * rel[i - 2];
      out.B[i] = -(3.0 * g0 - 4.0 * g1 + g2) / (2.0 * h) - s.B[i] * rate;
      continue;
    }

    out.rho[i] = -(mass_flux(i, right) - mass_flux(i - 1, left)) / (r[i] * h) -
                 2.0 * s.rho[i] * rate;
    const double P_r = (s.P[i + 1] - s.P[i - 1]) / (2.0 * h);
    out.P[i] = -rel[i] * P_r - p.gamma * s.P[i] * out.div[i] +
               (dissipation(right, kP, s.P, i, 1.0) - dissipation(left, kP, s.P, i - 1, 1.0)) / h;
    // B(0) stays zero, so nothing crosses the first face and node 1 owns the
    // axis half cell. This keeps the trapezoid flux integral exact.
    const double inflow = i == 1 ? 0.0 : field_flux(i - 1, left);
    out.B[i] = -(field_flux(i, right) - inflow) / h - s.B[i] * rate;

    const double u_r = (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
    double fu = -s.rho[i] * rel[i] * u_r - P_r - lorentz(s.B, r, i, h);
    out.lu[i] = nu * (div_face(s.u, i) - div_face(s.u, i - 1)) / h;
    if (swirl) {
      fu += s.rho[i] * s.v[i] * s.v[i] / r[i];
      const double v_r = (s.v[i + 1] - s.v[i - 1]) / (2.0 * h);
      out.fv[i] = -s.rho[i] * (rel[i] * v_r + carry[i] * s.v[i] / r[i]);
      out.lv[i] = p.mu * (div_face(s.v, i) - div_face(s.v, i - 1)) / h;
      const double w_r = (s.w[i + 1] - s.w[i - 1]) / (2.0 * h);
      out.fw[i] = -s.rho[i] * rel[i] * w_r;
      const double rp = 0.5 * (r[i] + r[i + 1]), rm = 0.5 * (r[i - 1] + r[i]);
      out.lw[i] = p.mu * (rp * (s.w[i + 1] - s.w[i]) - rm * (s.w[i] - s.w[i - 1])) / (r[i] * h * h);
    }
    out.fu[i] = fu;
  }
}

}  // namespace mhdlab::kernels
