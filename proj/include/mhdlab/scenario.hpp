#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mhdlab/grid.hpp"
#include "mhdlab/params.hpp"
#include "mhdlab/profile.hpp"
#include "mhdlab/settings.hpp"
#include "mhdlab/state.hpp"
#include "mhdlab/tracker.hpp"

namespace mhdlab {

struct ScenarioConfig {
  std::string name = "unnamed";
  long N = 256;
  double R_outer = 1.0;  // a0 for the free-boundary geometry
  PhysParams phys;

  Profile rho, u, P, B;
  std::optional<Profile> v, w;  // cylinder only
  std::optional<double> r0;     // vacuum core radius

  double t_end = 1.0;
  long max_steps = 5'000'000;
  SolverSettings solver;

  std::optional<double> alpha;  // moment multiplier exponent; default: optimal alpha
  long stride = 1;
  std::string out_dir;

  bool mms = false;  // manufactured-solution run: forcing on, analytic initial data
  double mms_amplitude = 0.1;

  double picard_window = 0.01;
  double picard_tol = 1e-8;
  long picard_kmax = 50;

  // Replacements for the measured bound inputs (bounds subcommand).
  std::optional<double> bound_C0, bound_E0, bound_alpha, bound_R;
};

struct Scenario {
  FluidState state;
  std::optional<VacuumFront> front;
  RadialGrid grid;
  double rho_max = 0.0;
};

/// Samples the profiles on the grid and builds the vacuum front. Throws
/// ConfigError when a hypothesis on the initial data fails.
Scenario init_scenario(const ScenarioConfig& cfg);

/// Parses `section.key = value` lines. Unknown keys and malformed lines raise
/// ConfigError with the line number; cross-field checks run at the end.
ScenarioConfig parse_config(std::string_view text);

/// Applies one `section.key=value` assignment and re-runs the consistency checks.
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

/// Checks that depend on several keys (swirl profiles vs geometry, physics).
void check_config(const ScenarioConfig& cfg);

ScenarioConfig load_config(const std::string& path);

}  // namespace mhdlab
