#include "mhdlab/settings.hpp"

#include <cmath>
#include <string>

#include "mhdlab/errors.hpp"

namespace mhdlab {

void SolverSettings::validate(double rho_max) const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("time.cfl must lie in (0,1)");
  if (!(eps_vac > 0.0)) throw ConfigError("solver.eps_vac must be > 0");
  if (rho_max > 0.0 && eps_vac > 1e-3 * rho_max)
    throw ConfigError("solver.eps_vac must not exceed 1e-3 * max rho0");
  if (!(blowup_gradu_max > 0.0)) throw ConfigError("solver.blowup_gradu_max must be > 0");
  if (!(dt_min > 0.0)) throw ConfigError("time.dt_min must be > 0");
}

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::SSPRK3_ExplicitViscous ? "ssprk3-explicit" : "rk2-implicit";
}

std::string_view to_string(VacuumStrategy s) noexcept {
  return s == VacuumStrategy::DensityFloor ? "density-floor" : "elliptic-balance";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "ssprk3-explicit") return Scheme::SSPRK3_ExplicitViscous;
  if (text == "rk2-implicit") return Scheme::RK2_ImplicitViscous;
  throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

VacuumStrategy parse_vacuum_strategy(std::string_view text) {
  if (text == "density-floor") return VacuumStrategy::DensityFloor;
  if (text == "elliptic-balance") return VacuumStrategy::EllipticBalance;
  throw ConfigError("unknown vacuum strategy '" + std::string(text) + "'");
}

}  // namespace mhdlab
