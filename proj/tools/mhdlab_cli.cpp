// Command-line front end: simulate a scenario, evaluate lifespan bounds, or
// run a convergence study.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhdlab/bounds.hpp"
#include "mhdlab/errors.hpp"
#include "mhdlab/mms.hpp"
#include "mhdlab/run.hpp"
#include "mhdlab/scenario.hpp"

namespace {

using namespace mhdlab;

ScenarioConfig resolve(const std::string& path, const std::string& preset,
                       const std::vector<std::string>& overrides) {
  if (path.empty() == preset.empty()) throw ConfigError("give exactly one of <config> or --preset");
  const std::string file =
      preset.empty() ? path : (std::filesystem::path(MHDLAB_PRESET_DIR) / (preset + ".cfg")).string();
  ScenarioConfig cfg = load_config(file);
  for (const auto& o : overrides) apply_override(cfg, o);
  return cfg;
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size() || v < 8) throw ConfigError("bad grid size '" + item + "' in --n");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--n needs at least one grid size");
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radially symmetric compressible MHD laboratory"};
  app.require_subcommand(1);

  std::string config, preset, out_dir, n_list = "128,256,512";
  std::vector<std::string> overrides;

  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write CSV/JSON");
  run_cmd->add_option("config", config, "scenario file");
  run_cmd->add_option("--out", out_dir, "output directory (default: output.dir or .)");
  run_cmd->add_option("--preset", preset, "name of a shipped preset");
  run_cmd->add_option("--override", overrides, "section.key=value")->take_all();

  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the lifespan bound only");
  bounds_cmd->add_option("config", config, "scenario file");
  bounds_cmd->add_option("--preset", preset, "name of a shipped preset");
  bounds_cmd->add_option("--override", overrides, "section.key=value")->take_all();

  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms_cmd->add_option("config", config, "scenario file");
  mms_cmd->add_option("--preset", preset, "name of a shipped preset");
  mms_cmd->add_option("--n", n_list, "comma-separated grid sizes");
  mms_cmd->add_option("--override", overrides, "section.key=value")->take_all();

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = resolve(config, preset, overrides);
    if (run_cmd->parsed()) {
      RunOptions opts;
      opts.out_dir = !out_dir.empty() ? out_dir : (!cfg.out_dir.empty() ? cfg.out_dir : ".");
      const RunOutcome out = run(cfg, opts);
      std::cout << outcome_json(out) << '\n';
      return exit_code(out.status);
    }
    if (bounds_cmd->parsed()) {
      const BoundSummary b = compute_bounds(cfg);
      nlohmann::ordered_json j;
      auto opt = [](const std::optional<double>& x) -> nlohmann::json {
        if (!x || !std::isfinite(*x)) return nullptr;
        return *x;
      };
      j["geometry"] = to_string(cfg.phys.geometry);
      j["alpha_star"] = opt(b.alpha_star);
      j["T_bound"] = opt(b.T_bound);
      j["C0"] = opt(b.C0);
      j["E0"] = b.E0;
      j["C_envelope"] = opt(b.C_envelope);
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    const auto Ns = parse_list(n_list);
    const auto rows = convergence_study(cfg, Ns);
    std::cout << "N,err_rho,err_u,err_P,err_B" << (rows.size() > 1 ? ",p_rho,p_u,p_P,p_B" : "") << '\n';
    for (const auto& r : rows) {
      std::cout << r.N << ',' << fmt(r.err_rho) << ',' << fmt(r.err_u) << ',' << fmt(r.err_P) << ','
                << fmt(r.err_B);
      if (rows.size() > 1) {
        auto o = [](const std::optional<double>& p) { return p ? fmt(*p) : std::string(); };
        std::cout << ',' << o(r.p_rho) << ',' << o(r.p_u) << ',' << o(r.p_P) << ',' << o(r.p_B);
      }
      std::cout << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
