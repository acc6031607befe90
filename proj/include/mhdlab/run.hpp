#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/scenario.hpp"

namespace mhdlab {

enum class RunStatus { Completed, BlowupDetected, Invalidated, Error };

std::string_view to_string(RunStatus s) noexcept;
int exit_code(RunStatus s) noexcept;

/// Lifespan-bound summary computed from the initial data.
struct BoundSummary {
  std::optional<double> alpha_star, T_bound, C0, C_envelope;
  double E0 = 0.0;
};

struct RunOutcome {
  RunStatus status = RunStatus::Error;
  double t_final = 0.0;
  std::optional<double> T_detected;
  std::string message;
  BoundSummary bounds;
  std::map<std::string, double> summary;  // aggregates; keys listed in the README
  std::vector<DiagnosticsRecord> history;
};

/// Called after every step with the new state and its grid.
using RunObserver =
    std::function<void(const FluidState&, const RadialGrid&, const DiagnosticsRecord&)>;

struct RunOptions {
  std::string out_dir;  // empty: no files
  RunObserver observer;
};

/// Bounds from the initial data, honouring the bounds.* replacements.
BoundSummary compute_bounds(const ScenarioConfig& cfg);

/// Full simulation pipeline: step, track, record, detect.
RunOutcome run(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Writes <dir>/<name>.csv and <dir>/<name>.json.
void write_outputs(const ScenarioConfig& cfg, const RunOutcome& out, const std::string& dir);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);
std::string outcome_json(const RunOutcome& out);

}  // namespace mhdlab
