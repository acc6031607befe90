#include "mhdlab/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "mhdlab/bounds.hpp"
#include "mhdlab/errors.hpp"
#include "mhdlab/free_boundary.hpp"
#include "mhdlab/solver.hpp"

namespace mhdlab {

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowupDetected: return "BlowupDetected";
    case RunStatus::Invalidated: return "Invalidated";
    case RunStatus::Error: return "Error";
  }
  return "Error";
}

int exit_code(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Completed: return 0;
    case RunStatus::BlowupDetected: return 2;
    case RunStatus::Invalidated: return 3;
    case RunStatus::Error: return 1;
  }
  return 1;
}

namespace {

constexpr double kEnergyIdentityTol = 2e-3;  // free-surface energy identity
constexpr int kSustainedRecords = 10;

BoundSummary bounds_from(const ScenarioConfig& cfg, double E0_measured,
                         std::optional<double> C0_measured) {
  BoundSummary b;
  b.E0 = cfg.bound_E0.value_or(E0_measured);
  const std::optional<double> C0 = cfg.bound_C0 ? cfg.bound_C0 : C0_measured;
  if (is_free(cfg.phys.geometry)) b.C_envelope = envelope_constant(cfg.R_outer, b.E0, cfg.phys.nu());
  if (!C0) return b;
  b.C0 = C0;
  BoundInputs in;
  in.mu = cfg.phys.mu;
  in.lam = cfg.phys.lam;
  in.C0 = *C0;
  in.E0 = b.E0;
  in.geometry = cfg.phys.geometry;
  in.R_ref = cfg.bound_R.value_or(is_free(cfg.phys.geometry) ? *b.C_envelope : cfg.R_outer);
  if (cfg.bound_alpha) {
    in.alpha = *cfg.bound_alpha;
    b.alpha_star = in.alpha;
    b.T_bound = lifespan_bound(in);
  } else {
    const AlphaOptimum opt = optimize_alpha(in);
    b.alpha_star = opt.alpha;
    b.T_bound = opt.T;
  }
  return b;
}

struct Prepared {
  Scenario sc;
  std::optional<MovingGrid> moving;
};

Prepared prepare(const ScenarioConfig& cfg) {
  Prepared p{init_scenario(cfg), std::nullopt};
  const bool free_surface = is_free(cfg.phys.geometry);
  if (free_surface) p.moving = make_moving_grid(cfg.N, cfg.R_outer);
  enforce_closure(p.sc.state, p.sc.grid.nodes, p.sc.grid.dr(), cfg.phys, cfg.solver, free_surface);
  return p;
}

std::string number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string number(const std::optional<double>& x) { return x ? number(*x) : std::string(); }

nlohmann::json json_number(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

// 2(u_r^2 + (u/r)^2) >= (u_r + u/r)^2 on the discrete derivative values.
long pointwise_violations(const FluidState& s, const RadialGrid& g) {
  const std::size_t last = s.size() - 1;
  const double h = g.dr();
  long bad = 0;
  for (std::size_t i = 1; i <= last; ++i) {
    const double ur = i < last ? (s.u[i + 1] - s.u[i - 1]) / (2.0 * h)
                               : (3.0 * s.u[i] - 4.0 * s.u[i - 1] + s.u[i - 2]) / (2.0 * h);
    const double q = s.u[i] / g.nodes[i];
    const double lhs = 2.0 * (ur * ur + q * q), rhs = (ur + q) * (ur + q);
    if (lhs - rhs < -1e-12 * std::max(lhs, 1e-300)) ++bad;
  }
  return bad;
}

}  // namespace

BoundSummary compute_bounds(const ScenarioConfig& cfg) {
  const Prepared p = prepare(cfg);
  const double E0 = total_energy(p.sc.state, p.sc.grid, cfg.phys);
  return bounds_from(cfg, E0, p.sc.front ? std::optional<double>(p.sc.front->C0) : std::nullopt);
}

RunOutcome run(const ScenarioConfig& cfg, const RunOptions& opts) {
  RunOutcome out;
  auto& sum = out.summary;
  try {
    Prepared prep = prepare(cfg);
    const PhysParams& p = cfg.phys;
    const SolverSettings& s = cfg.solver;
    const bool free_surface = is_free(p.geometry);
    FluidState state = prep.sc.state;
    std::optional<VacuumFront> front = prep.sc.front;
    std::optional<MovingGrid> mg = prep.moving;
    RadialGrid grid = prep.sc.grid;
    const double rho_max0 = prep.sc.rho_max;

    const double E0 = total_energy(state, grid, p);
    out.bounds = bounds_from(cfg, E0, front ? std::optional<double>(front->C0) : std::nullopt);
    const double alpha = cfg.alpha.value_or(out.bounds.alpha_star.value_or(1.5));
    const double mass0 = integrate(state.rho, grid, Weight::RadialR);

    double clipped = 0.0, stress_max = 0.0, flux_max = 0.0, vac_rho = 0.0, vac_P = 0.0;
    double moment_gap = 0.0, mass_drift = 0.0;
    long vac_fail = 0, order_viol = 0, pointwise_bad = 0, bound_records = 0, bound_hits = 0;
    int identity_streak = 0;
    bool invalid_identity = false;

    auto record = [&](double dt) {
      DiagnosticsRecord r;
      r.t = state.t;
      r.energy = total_energy(state, grid, p);
      r.dissipation = dissipation_rate(state, grid, p);
      if (!out.history.empty()) {
        const auto& prev = out.history.back();
        r.dissipation_cum = prev.dissipation_cum + 0.5 * (r.t - prev.t) * (r.dissipation + prev.dissipation);
      }
      r.div_l2 = div_norm(state, grid);
      r.max_gradu = max_velocity_gradient(state, grid);
      r.dt = dt;
      if (mg) r.a_boundary = mg->a;
      if (front) {
        r.R_front = front->R;
        r.flux_vacuum = vacuum_flux(state, *front, grid);
        const MomentPair m = moment_pair(state, *front, grid, p, alpha);
        r.moment_lhs = m.lhs;
        r.moment_rhs = m.rhs;
        BoundInputs b;
        b.mu = p.mu;
        b.lam = p.lam;
        b.C0 = front->C0;
        b.alpha = alpha;
        b.geometry = p.geometry;
        r.div_lower_bound = div_lower_bound(b, mg ? mg->a : cfg.R_outer);

        flux_max = std::max(flux_max, std::abs(*r.flux_vacuum - front->C0) / std::abs(front->C0));
        const VacuumReport vr = check_vacuum(state, *front, grid, 1e-6 * rho_max0);
        if (!vr.pass) ++vac_fail;
        const double scale = rho_max0 > 0.0 ? rho_max0 : 1.0;
        vac_rho = std::max(vac_rho, vr.max_rho / scale);
        vac_P = std::max(vac_P, vr.max_P / scale);
        moment_gap = std::max(moment_gap, std::abs(m.lhs - m.rhs) / std::max(std::abs(m.rhs), 1e-300));
        ++bound_records;
        if (r.div_l2 >= 0.9 * *r.div_lower_bound) ++bound_hits;
        if (mg && front->R > mg->a) ++order_viol;
      }
      if (has_swirl(p.geometry)) pointwise_bad += pointwise_violations(state, grid);
      if (!free_surface && mass0 > 0.0)
        mass_drift = std::max(mass_drift, std::abs(integrate(state.rho, grid, Weight::RadialR) - mass0) / mass0);
      if (free_surface && E0 > 0.0) {
        const double res = std::abs(r.energy + r.dissipation_cum - E0) / E0;
        identity_streak = res > 10.0 * kEnergyIdentityTol ? identity_streak + 1 : 0;
        if (identity_streak >= kSustainedRecords) invalid_identity = true;
      }
      out.history.push_back(r);
      if (opts.observer) opts.observer(state, grid, r);
    };

    record(0.0);
    long steps = 0;
    std::string stop;
    try {
      for (;;) {
        const double dt_cfl = cfl_dt(state, grid, p, s);
        if (steps == 0 && dt_cfl < s.dt_min) {
          out.status = RunStatus::Error;
          out.message = "time.dt_min exceeds the initial stable step " + number(dt_cfl);
          break;
        }
        const BlowupCheck check = detect_blowup(state, grid, s, dt_cfl);
        if (check.health == Health::Suspected) {
          out.status = RunStatus::BlowupDetected;
          out.T_detected = state.t;
          out.message = check.reason;
          break;
        }
        if (invalid_identity) {
          out.status = RunStatus::Invalidated;
          out.message = "energy identity failed by more than 10x tolerance for " +
                        std::to_string(kSustainedRecords) + " records";
          break;
        }
        if (state.t >= cfg.t_end) {
          out.status = RunStatus::Completed;
          break;
        }
        if (steps >= cfg.max_steps) {
          out.status = RunStatus::Error;
          out.message = "time.max_steps reached at t = " + number(state.t);
          break;
        }
        double dt = dt_cfl;
        const double left = cfg.t_end - state.t;
        const bool last_step = dt >= left;
        if (last_step) dt = left;
        else if (dt > 0.5 * left) dt = 0.5 * left;

        StepLog log;
        FluidState next;
        RadialGrid next_grid = grid;
        if (mg) {
          FreeStep fs = step_free(state, *mg, dt, p, s, &log);
          next = std::move(fs.state);
          mg = fs.grid;
          next_grid = mg->physical;
        } else {
          next = step(state, dt, p, grid, s, &log);
        }
        if (last_step) next.t = cfg.t_end;
        clipped += log.clipped_mass;
        stress_max = std::max(stress_max, log.stress_residual);
        if (front) front = advance_front(*front, state, grid, next, next_grid, dt);
        state = std::move(next);
        grid = std::move(next_grid);
        ++steps;
        record(dt);
      }
    } catch (const TrackingError& e) {
      out.status = RunStatus::Invalidated;
      out.message = e.what();
    } catch (const NumericalFailure& e) {
      out.status = RunStatus::Error;
      out.message = e.what();
    }
    out.t_final = state.t;

    sum["steps"] = static_cast<double>(steps);
    sum["records"] = static_cast<double>(out.history.size());
    sum["E0"] = E0;
    sum["alpha_used"] = alpha;
    if (out.history.size() >= 2) {
      const EnergyResidual er = energy_residual(out.history);
      sum["energy_residual_abs"] = er.absolute;
      sum["energy_residual_creation"] = er.creation;
    } else {
      sum["energy_residual_abs"] = 0.0;
      sum["energy_residual_creation"] = 0.0;
    }
    sum["clipped_mass_rel"] = mass0 > 0.0 ? clipped / mass0 : clipped;
    if (!free_surface) sum["mass_drift_rel"] = mass_drift;
    if (front) {
      sum["flux_residual_max"] = flux_max;
      sum["vacuum_max_rho_rel"] = vac_rho;
      sum["vacuum_max_P_rel"] = vac_P;
      sum["vacuum_fail_records"] = static_cast<double>(vac_fail);
      sum["moment_gap_max_rel"] = moment_gap;
      sum["div_bound_fraction"] =
          bound_records > 0 ? static_cast<double>(bound_hits) / static_cast<double>(bound_records) : 0.0;
    }
    if (free_surface) {
      sum["stress_residual_max"] = stress_max;
      sum["front_order_violations"] = static_cast<double>(order_viol);
      const GrowthReport gr = growth_check(out.history, cfg.R_outer, E0, p);
      sum["growth_pass"] = gr.pass ? 1.0 : 0.0;
      sum["growth_worst_excess"] = gr.worst_excess;
    }
    if (has_swirl(p.geometry)) sum["pointwise_3d_violations"] = static_cast<double>(pointwise_bad);
  } catch (const ConfigError& e) {
    out.status = RunStatus::Error;
    out.message = e.what();
  } catch (const DomainError& e) {
    out.status = RunStatus::Error;
    out.message = e.what();
  }
  if (!opts.out_dir.empty()) write_outputs(cfg, out, opts.out_dir);
  return out;
}

std::string csv_header() {
  return "t,energy,dissipation_cum,flux_vacuum,R_front,a_boundary,div_l2,div_lower_bound,"
         "moment_lhs,moment_rhs,max_gradu,dt";
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::string line;
  for (const std::string& f :
       {number(r.t), number(r.energy), number(r.dissipation_cum), number(r.flux_vacuum),
        number(r.R_front), number(r.a_boundary), number(r.div_l2), number(r.div_lower_bound),
        number(r.moment_lhs), number(r.moment_rhs), number(r.max_gradu), number(r.dt)}) {
    if (!line.empty()) line += ',';
    line += f;
  }
  return line;
}

std::string outcome_json(const RunOutcome& out) {
  nlohmann::ordered_json j;
  j["status"] = to_string(out.status);
  j["t_final"] = out.t_final;
  j["T_detected"] = json_number(out.T_detected);
  j["alpha_star"] = json_number(out.bounds.alpha_star);
  j["T_bound"] = json_number(out.bounds.T_bound);
  j["C0"] = json_number(out.bounds.C0);
  j["E0"] = out.bounds.E0;
  j["C_envelope"] = json_number(out.bounds.C_envelope);
  auto get = [&](const char* key) -> std::optional<double> {
    const auto it = out.summary.find(key);
    return it == out.summary.end() ? std::nullopt : std::optional<double>(it->second);
  };
  const bool free_surface = out.bounds.C_envelope.has_value();
  j["residuals"] = {
      {"energy", json_number(get(free_surface ? "energy_residual_abs" : "energy_residual_creation"))},
      {"flux", json_number(get("flux_residual_max"))},
      {"vacuum", json_number([&]() -> std::optional<double> {
         const auto a = get("vacuum_max_rho_rel"), b = get("vacuum_max_P_rel");
         if (!a || !b) return std::nullopt;
         return std::max(*a, *b);
       }())}};
  if (!out.message.empty()) j["message"] = out.message;
  nlohmann::ordered_json s;
  for (const auto& [k, v] : out.summary) s[k] = json_number(v);
  j["summary"] = s;
  return j.dump(2);
}

void write_outputs(const ScenarioConfig& cfg, const RunOutcome& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base = std::filesystem::path(dir) / cfg.name;
  std::ofstream csv(base.string() + ".csv");
  csv << csv_header() << '\n';
  const std::size_t n = out.history.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k % static_cast<std::size_t>(cfg.stride) == 0 || k + 1 == n) csv << csv_row(out.history[k]) << '\n';
  }
  std::ofstream js(base.string() + ".json");
  js << outcome_json(out) << '\n';
  if (!csv || !js) throw ConfigError("cannot write outputs under '" + dir + "'");
}

}  // namespace mhdlab
