#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mhdlab/errors.hpp"
#include "mhdlab/mms.hpp"
#include "mhdlab/run.hpp"

using namespace mhdlab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# smallest useful disk run
scenario.name = "tiny"
grid.N = 32
physics.geometry = "disk2d"
physics.mu = 0.1
initial.rho = "constant 1"
initial.u = "zero"
initial.P = "constant 1"
initial.B = "zero"
time.t_end = 0.01
)";

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Shell {
  int code = -1;
  std::string out;
};

Shell shell(const std::string& args) {
  Shell r;
  const std::string cmd = std::string(MHDLAB_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mhdlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("parse_config: minimal disk config") {
  const ScenarioConfig c = parse_config(kMinimal);
  CHECK(c.name == "tiny");
  CHECK(c.N == 32);
  CHECK(c.phys.geometry == Geometry::Disk2D);
  CHECK(c.phys.mu == 0.1);
  CHECK(c.t_end == 0.01);
  CHECK_FALSE(c.r0.has_value());
  CHECK_FALSE(c.v.has_value());
}

TEST_CASE("parse_config: rejected inputs") {
  CHECK(config_error(std::string(kMinimal) + "initial.v = \"zero\"\n").find("geometry") != std::string::npos);
  CHECK_FALSE(config_error(std::string(kMinimal) + "physics.gamma = 0.9\n").empty());
  CHECK_FALSE(config_error(std::string(kMinimal) + "physics.gamma = 1\n").empty());

  const std::string unknown = config_error(std::string(kMinimal) + "physics.nonsense = 3\n");
  CHECK(unknown.find("line 11") != std::string::npos);
  CHECK(unknown.find("nonsense") != std::string::npos);

  const std::string syntax = config_error("scenario.name = \"x\"\ngrid.N 64\n");
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK(config_error("grid.N = 64.5\n").find("line 1") != std::string::npos);
  CHECK(config_error("scenario.name = \"open\n").find("line 1") != std::string::npos);
  CHECK(config_error("grid.N = 4\n").find("grid.N") != std::string::npos);
  // comments and blank lines are fine, also after a value
  CHECK(config_error(std::string(kMinimal) + "\n   # note\ngrid.N = 40  # more\n").empty());
}

TEST_CASE("parse_config: swirl fields belong to the cylinder") {
  std::string text = kMinimal;
  text += "physics.geometry = \"cylinder3d\"\ninitial.v = \"bump 0.2 0.6 0.1\"\ninitial.w = \"zero\"\n";
  const ScenarioConfig c = parse_config(text);
  CHECK(c.phys.geometry == Geometry::Cylinder3D);
  CHECK(c.v.has_value());
}

TEST_CASE("apply_override") {
  ScenarioConfig c = parse_config(kMinimal);
  apply_override(c, "grid.N=64");
  CHECK(c.N == 64);
  apply_override(c, "scenario.name=\"renamed\"");
  CHECK(c.name == "renamed");
  CHECK_THROWS_AS(apply_override(c, "grid.N"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "foo.bar=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "physics.gamma=0.5"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "initial.v=\"zero\""), ConfigError);
}

TEST_CASE("run: statuses and exit codes") {
  CHECK(exit_code(RunStatus::Completed) == 0);
  CHECK(exit_code(RunStatus::BlowupDetected) == 2);
  CHECK(exit_code(RunStatus::Invalidated) == 3);
  CHECK(exit_code(RunStatus::Error) == 1);

  ScenarioConfig c = load_config(MHDLAB_PRESET_DIR "/smooth-novac.cfg");
  c.N = 128;
  const RunOutcome ok = run(c);
  CHECK(ok.status == RunStatus::Completed);
  CHECK(ok.t_final == c.t_end);
  CHECK_FALSE(ok.T_detected.has_value());
  CHECK(ok.history.front().t == 0.0);
  CHECK(ok.history.back().t == c.t_end);
  CHECK(ok.summary.at("steps") + 1 == ok.summary.at("records"));

  ScenarioConfig slow = c;
  slow.solver.dt_min = 1.0;
  const RunOutcome err = run(slow);
  CHECK(err.status == RunStatus::Error);
  CHECK(err.message.find("dt_min") != std::string::npos);

  ScenarioConfig capped = c;
  capped.max_steps = 3;
  CHECK(run(capped).status == RunStatus::Error);

  ScenarioConfig bad = c;
  bad.rho = Profile::parse("constant -1");
  CHECK(run(bad).status == RunStatus::Error);
}

TEST_CASE("run: blowup outcome carries T_detected") {
  ScenarioConfig c = load_config(MHDLAB_PRESET_DIR "/disk-blowup.cfg");
  c.N = 256;
  const RunOutcome out = run(c);
  REQUIRE(out.status == RunStatus::BlowupDetected);
  REQUIRE(out.T_detected.has_value());
  CHECK(*out.T_detected <= c.t_end);
  CHECK(*out.T_detected == out.t_final);
  CHECK(out.bounds.T_bound.has_value());
}

TEST_CASE("outputs: fixed header, stride, determinism") {
  ScenarioConfig c = load_config(MHDLAB_PRESET_DIR "/smooth-novac.cfg");
  c.N = 128;
  c.stride = 7;
  const fs::path d1 = scratch("a"), d2 = scratch("b");
  RunOptions o1, o2;
  o1.out_dir = d1.string();
  o2.out_dir = d2.string();
  const RunOutcome out = run(c, o1);
  run(c, o2);
  const std::string csv = slurp(d1 / "smooth-novac.csv");
  const std::string js = slurp(d1 / "smooth-novac.json");
  CHECK(csv == slurp(d2 / "smooth-novac.csv"));
  CHECK(js == slurp(d2 / "smooth-novac.json"));

  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "t,energy,dissipation_cum,flux_vacuum,R_front,a_boundary,div_l2,div_lower_bound,moment_lhs,moment_rhs,"
        "max_gradu,dt");
  std::size_t rows = 0;
  std::string row, last;
  while (std::getline(lines, row)) {
    ++rows;
    last = row;
    CHECK(std::count(row.begin(), row.end(), ',') == 11);
    // no vacuum and fixed boundary: those columns stay empty
    CHECK(row.find(",,,") != std::string::npos);
  }
  const std::size_t n = out.history.size();
  CHECK(rows == (n - 1) / 7 + 1 + ((n - 1) % 7 != 0 ? 1 : 0));
  CHECK(last == csv_row(out.history.back()));

  const auto j = nlohmann::json::parse(js);
  for (const char* key : {"status", "t_final", "T_detected", "alpha_star", "T_bound", "C0", "E0", "C_envelope"})
    CHECK(j.contains(key));
  CHECK(j["status"] == "Completed");
  CHECK(j["T_detected"].is_null());
  CHECK(j["residuals"].contains("energy"));
  CHECK(j["residuals"].contains("flux"));
  CHECK(j["residuals"].contains("vacuum"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("convergence_study: table shape and exact start") {
  ScenarioConfig c = load_config(MHDLAB_PRESET_DIR "/mms.cfg");
  const std::array<long, 1> one{32};
  const auto rows = convergence_study(c, one);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].p_rho.has_value());
  CHECK_FALSE(rows[0].p_B.has_value());
  CHECK(rows[0].err_rho > 0.0);

  const ManufacturedSolution m{c.mms_amplitude, c.R_outer, c.phys};
  const RadialGrid g = make_grid(64, c.R_outer);
  const FluidState s = solve_manufactured(c, 64, 0.0);
  const FluidState e = m.exact(g, 0.0);
  CHECK(l2_error(s.rho, e.rho, g) == 0.0);
  CHECK(l2_error(s.u, e.u, g) == 0.0);
  CHECK(l2_error(s.P, e.P, g) == 0.0);
  CHECK(l2_error(s.B, e.B, g) == 0.0);

  const std::array<long, 2> two{32, 64};
  const auto pair = convergence_study(c, two);
  CHECK_FALSE(pair[0].p_u.has_value());
  REQUIRE(pair[1].p_u.has_value());
  CHECK(*pair[1].p_u > 1.5);
}

TEST_CASE("cli: bounds, run and mms") {
  const Shell b = shell("bounds --preset disk-blowup --override grid.N=128");
  CHECK(b.code == 0);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["geometry"] == "disk2d");
  CHECK(j["T_bound"].get<double>() > 0.0);
  CHECK(j["C_envelope"].is_null());

  const fs::path d = scratch("cli");
  const Shell ok = shell("run --preset smooth-novac --override grid.N=64 --out " + d.string());
  CHECK(ok.code == 0);
  CHECK(fs::exists(d / "smooth-novac.csv"));
  CHECK(nlohmann::json::parse(ok.out)["status"] == "Completed");

  CHECK(shell("run --preset disk-blowup --override grid.N=128 --out " + d.string()).code == 2);
  CHECK(shell("run --preset smooth-novac --override time.dt_min=1 --out " + d.string()).code == 1);
  CHECK(shell("run --preset no-such-preset").code == 1);
  CHECK(shell("run --preset smooth-novac --override bogus.key=1").code == 1);

  const Shell single = shell("mms --preset mms --n 32");
  CHECK(single.code == 0);
  CHECK(single.out.rfind("N,err_rho,err_u,err_P,err_B\n", 0) == 0);
  const Shell pair = shell("mms --preset mms --n 32,64");
  CHECK(pair.out.find("p_rho") != std::string::npos);
  fs::remove_all(d);
}
