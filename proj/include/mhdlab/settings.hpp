#pragma once

#include <string_view>

namespace mhdlab {

enum class Scheme { SSPRK3_ExplicitViscous, RK2_ImplicitViscous };

/// How the momentum equation is closed where the density (nearly) vanishes.
enum class VacuumStrategy {
  DensityFloor,    // divide by max(rho, eps_vac) in the momentum equation only
  EllipticBalance  // drop inertia and solve the quasi-static viscous/Lorentz balance
};

struct SolverSettings {
  double cfl = 0.4;
  Scheme scheme = Scheme::RK2_ImplicitViscous;
  VacuumStrategy vacuum_strategy = VacuumStrategy::EllipticBalance;
  double eps_vac = 1e-4;           // nodes with rho < eps_vac are vacuum
  double blowup_gradu_max = 1e4;
  double dt_min = 1e-12;

  /// Throws ConfigError on out-of-range values. `rho_max` is the largest
  /// initial density; eps_vac must not exceed 1e-3 of it.
  void validate(double rho_max) const;
};

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(VacuumStrategy s) noexcept;
Scheme parse_scheme(std::string_view text);
VacuumStrategy parse_vacuum_strategy(std::string_view text);

}  // namespace mhdlab
