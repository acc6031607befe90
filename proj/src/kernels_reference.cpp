#include <algorithm>
#include <cmath>

#include "mhdlab/kernels.hpp"

namespace mhdlab::reference {

using kernels::k2;
using kernels::k4;

void evaluate(const kernels::Input& in, kernels::Parts& out) {
  const FluidState& s = *in.state;
  const PhysParams& p = *in.phys;
  const std::size_t n = s.size();
  const std::size_t N = n - 1;
  const bool swirl = s.has_swirl();
  const double h = in.dr;
  const auto& r = in.r;
  out.resize(n, swirl);
  const std::span<const double> carry =
      in.transport.empty() ? std::span<const double>(s.u) : in.transport;

  std::vector<double> rel(n);
  for (std::size_t i = 0; i < n; ++i) {
    rel[i] = carry[i] - r[i] * in.grid_rate;
    out.speed[i] = std::abs(rel[i]);
  }
  auto sensor_of = [&](const std::vector<double>& q, std::size_t j, double parity) {
    const double qm = j == 0 ? parity * q[1] : q[j - 1];
    const double den = std::abs(q[j + 1]) + 2.0 * std::abs(q[j]) + std::abs(qm);
    return den > 0.0 ? std::abs(q[j + 1] - 2.0 * q[j] + qm) / den : 0.0;
  };
  std::vector<double> psr(n), psp(n), psb(n);
  for (std::size_t i = 0; i < N; ++i) {
    psr[i] = sensor_of(s.rho, i, 1.0);
    psp[i] = sensor_of(s.P, i, 1.0);
    psb[i] = sensor_of(s.B, i, -1.0);
  }
  psr[N] = psr[N - 1];
  psp[N] = psp[N - 1];
  psb[N] = psb[N - 1];

  // Face quantities, index f stands for face f + 1/2.
  std::vector<double> a(N), rf(N);
  for (std::size_t f = 0; f < N; ++f) {
    a[f] = std::max(out.speed[f], out.speed[f + 1]);
    rf[f] = 0.5 * (r[f] + r[f + 1]);
  }
  auto diss = [&](const std::vector<double>& q, const std::vector<double>& psi, double parity) {
    std::vector<double> d(N);
    for (std::size_t f = 0; f < N; ++f) {
      const double e2 = k2 * std::max(psi[f], psi[f + 1]);
      const double e4 = std::max(0.0, k4 - e2);
      double val = e2 * (q[f + 1] - q[f]);
      if (f + 2 <= N) {
        const double qm = f == 0 ? parity * q[1] : q[f - 1];
        val -= e4 * (q[f + 2] - 3.0 * q[f + 1] + 3.0 * q[f] - qm);
      }
      d[f] = a[f] * val;
    }
    return d;
  };
  const auto drho = diss(s.rho, psr, 1.0);
  const auto dP = diss(s.P, psp, 1.0);
  const auto dB = diss(s.B, psb, -1.0);

  std::vector<double> Frho(N), FB(N), du(N), dv(N), dw(N);
  for (std::size_t f = 0; f < N; ++f) {
    // rho * rel at the face: cubic inside (odd reflection at the axis), quadratic at the last face.
    auto q = [&](long j) {
      return j < 0 ? -s.rho[-j] * rel[-j] : s.rho[j] * rel[j];
    };
    const long lf = static_cast<long>(f);
    double m = 0.0;
    if (f + 1 == N) {
      m = (3.0 * q(lf + 1) + 6.0 * q(lf) - q(lf - 1)) / 8.0;
    } else {
      m = (-q(lf - 1) + 9.0 * q(lf) + 9.0 * q(lf + 1) - q(lf + 2)) / 16.0;
    }
    Frho[f] = rf[f] * (m - drho[f]);
    FB[f] = f == 0 ? 0.0 : 0.5 * (s.B[f] * rel[f] + s.B[f + 1] * rel[f + 1]) - dB[f];
    du[f] = (r[f + 1] * s.u[f + 1] - r[f] * s.u[f]) / (rf[f] * h);
    if (swirl) {
      dv[f] = (r[f + 1] * s.v[f + 1] - r[f] * s.v[f]) / (rf[f] * h);
      dw[f] = rf[f] * (s.w[f + 1] - s.w[f]);
    }
  }

  const auto& c = carry;
  out.div[0] = 2.0 * c[1] / h;
  for (std::size_t i = 1; i < N; ++i) out.div[i] = (c[i + 1] - c[i - 1]) / (2.0 * h) + c[i] / r[i];
  out.div[N] = (3.0 * c[N] - 4.0 * c[N - 1] + c[N - 2]) / (2.0 * h) + c[N] / r[N];

  const double rate = in.grid_rate;
  out.rho[0] = -Frho[0] / (h * h / 8.0) - 2.0 * s.rho[0] * rate;
  out.rho[N] = Frho[N - 1] / (r[N] * h / 2.0 - h * h / 8.0) - 2.0 * s.rho[N] * rate;
  out.P[0] = -p.gamma * s.P[0] * out.div[0] + 2.0 * dP[0] / h;
  out.P[N] = -p.gamma * s.P[N] * out.div[N] - 2.0 * dP[N - 1] / h;
  out.B[0] = 0.0;
  out.B[N] = -(3.0 * s.B[N] * rel[N] - 4.0 * s.B[N - 1] * rel[N - 1] + s.B[N - 2] * rel[N - 2]) /
                 (2.0 * h) -
             s.B[N] * rate;
  if (swirl) out.lw[0] = 4.0 * p.mu * (s.w[1] - s.w[0]) / (h * h);

  for (std::size_t i = 1; i < N; ++i) {
    out.rho[i] = -(Frho[i] - Frho[i - 1]) / (r[i] * h) - 2.0 * s.rho[i] * rate;
    const double P_r = (s.P[i + 1] - s.P[i - 1]) / (2.0 * h);
    out.P[i] = -rel[i] * P_r - p.gamma * s.P[i] * out.div[i] + (dP[i] - dP[i - 1]) / h;
    out.B[i] = -(FB[i] - FB[i - 1]) / h - s.B[i] * rate;

    const double u_r = (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
    const double lorentz = kernels::lorentz(s.B, r, i, h);
    out.fu[i] = -s.rho[i] * rel[i] * u_r - P_r - lorentz;
    out.lu[i] = p.nu() * (du[i] - du[i - 1]) / h;
    if (swirl) {
      out.fu[i] += s.rho[i] * s.v[i] * s.v[i] / r[i];
      const double v_r = (s.v[i + 1] - s.v[i - 1]) / (2.0 * h);
      out.fv[i] = -s.rho[i] * (rel[i] * v_r + carry[i] * s.v[i] / r[i]);
      out.lv[i] = p.mu * (dv[i] - dv[i - 1]) / h;
      out.fw[i] = -s.rho[i] * rel[i] * (s.w[i + 1] - s.w[i - 1]) / (2.0 * h);
      out.lw[i] = p.mu * (dw[i] - dw[i - 1]) / (r[i] * h * h);
    }
  }
}

}  // namespace mhdlab::reference
