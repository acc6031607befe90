#include "mhdlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mhdlab/errors.hpp"

namespace mhdlab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Value {
  std::string text;
  bool quoted = false;
};

double number(const Value& v) {
  if (v.quoted) throw ConfigError("expected a number, got a string");
  double x = 0.0;
  const char* end = v.text.data() + v.text.size();
  auto [ptr, ec] = std::from_chars(v.text.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad number '" + v.text + "'");
  return x;
}

long integer(const Value& v) {
  const double x = number(v);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError("expected an integer, got '" + v.text + "'");
  return static_cast<long>(x);
}

bool boolean(const Value& v) {
  if (v.text == "true") return true;
  if (v.text == "false") return false;
  throw ConfigError("expected true or false, got '" + v.text + "'");
}

using Setter = std::function<void(ScenarioConfig&, const Value&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.name", [](auto& c, const Value& v) { c.name = v.text; }},
      {"grid.N", [](auto& c, const Value& v) { c.N = integer(v); }},
      {"grid.R_outer", [](auto& c, const Value& v) { c.R_outer = number(v); }},
      {"physics.mu", [](auto& c, const Value& v) { c.phys.mu = number(v); }},
      {"physics.lambda", [](auto& c, const Value& v) { c.phys.lam = number(v); }},
      {"physics.gamma", [](auto& c, const Value& v) { c.phys.gamma = number(v); }},
      {"physics.geometry", [](auto& c, const Value& v) { c.phys.geometry = parse_geometry(v.text); }},
      {"initial.rho", [](auto& c, const Value& v) { c.rho = Profile::parse(v.text); }},
      {"initial.u", [](auto& c, const Value& v) { c.u = Profile::parse(v.text); }},
      {"initial.P", [](auto& c, const Value& v) { c.P = Profile::parse(v.text); }},
      {"initial.B", [](auto& c, const Value& v) { c.B = Profile::parse(v.text); }},
      {"initial.v", [](auto& c, const Value& v) { c.v = Profile::parse(v.text); }},
      {"initial.w", [](auto& c, const Value& v) { c.w = Profile::parse(v.text); }},
      {"initial.r0", [](auto& c, const Value& v) { c.r0 = number(v); }},
      {"time.t_end", [](auto& c, const Value& v) { c.t_end = number(v); }},
      {"time.max_steps", [](auto& c, const Value& v) { c.max_steps = integer(v); }},
      {"time.cfl", [](auto& c, const Value& v) { c.solver.cfl = number(v); }},
      {"time.scheme", [](auto& c, const Value& v) { c.solver.scheme = parse_scheme(v.text); }},
      {"time.dt_min", [](auto& c, const Value& v) { c.solver.dt_min = number(v); }},
      {"solver.vacuum_strategy",
       [](auto& c, const Value& v) { c.solver.vacuum_strategy = parse_vacuum_strategy(v.text); }},
      {"solver.eps_vac", [](auto& c, const Value& v) { c.solver.eps_vac = number(v); }},
      {"solver.blowup_gradu_max", [](auto& c, const Value& v) { c.solver.blowup_gradu_max = number(v); }},
      {"diagnostics.alpha", [](auto& c, const Value& v) { c.alpha = number(v); }},
      {"output.stride", [](auto& c, const Value& v) { c.stride = integer(v); }},
      {"output.dir", [](auto& c, const Value& v) { c.out_dir = v.text; }},
      {"mms.enabled", [](auto& c, const Value& v) { c.mms = boolean(v); }},
      {"mms.amplitude", [](auto& c, const Value& v) { c.mms_amplitude = number(v); }},
      {"picard.window", [](auto& c, const Value& v) { c.picard_window = number(v); }},
      {"picard.tol", [](auto& c, const Value& v) { c.picard_tol = number(v); }},
      {"picard.k_max", [](auto& c, const Value& v) { c.picard_kmax = integer(v); }},
      {"bounds.C0", [](auto& c, const Value& v) { c.bound_C0 = number(v); }},
      {"bounds.E0", [](auto& c, const Value& v) { c.bound_E0 = number(v); }},
      {"bounds.alpha", [](auto& c, const Value& v) { c.bound_alpha = number(v); }},
      {"bounds.R_ref", [](auto& c, const Value& v) { c.bound_R = number(v); }},
  };
  return table;
}

Value parse_value(std::string_view raw) {
  Value v;
  std::string t = trim(raw);
  if (!t.empty() && t.front() == '"') {
    const auto close = t.find('"', 1);
    if (close == std::string::npos) throw ConfigError("unterminated string");
    if (!trim(std::string_view(t).substr(close + 1)).empty())
      throw ConfigError("text after closing quote");
    v.text = t.substr(1, close - 1);
    v.quoted = true;
  } else {
    if (t.empty()) throw ConfigError("missing value");
    v.text = t;
  }
  return v;
}

// Strips a '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

void assign(ScenarioConfig& cfg, std::string_view key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected 'section.key = value'");
  const std::string key = trim(key_value.substr(0, eq));
  if (key.empty()) throw ConfigError("missing key");
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  try {
    it->second(cfg, parse_value(key_value.substr(eq + 1)));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

void check_config(const ScenarioConfig& cfg) {
  cfg.phys.validate();
  if (!has_swirl(cfg.phys.geometry) && (cfg.v || cfg.w))
    throw ConfigError("initial.v / initial.w are not fields of geometry " +
                      std::string(to_string(cfg.phys.geometry)));
  if (cfg.N < 8) throw ConfigError("grid.N must be at least 8");
  if (!(cfg.R_outer > 0.0)) throw ConfigError("grid.R_outer must be > 0");
  if (!(cfg.t_end > 0.0)) throw ConfigError("time.t_end must be > 0");
  if (cfg.stride < 1) throw ConfigError("output.stride must be >= 1");
  if (cfg.max_steps < 1) throw ConfigError("time.max_steps must be >= 1");
  if (cfg.mms && (is_free(cfg.phys.geometry) || has_swirl(cfg.phys.geometry)))
    throw ConfigError("the manufactured solution is defined for disk2d only");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    const std::string body = trim(strip_comment(line));
    if (!body.empty()) {
      try {
        assign(cfg, body);
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  check_config(cfg);
  return cfg;
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  try {
    assign(cfg, assignment);
  } catch (const ConfigError& e) {
    throw ConfigError("override '" + std::string(assignment) + "': " + e.what());
  }
  check_config(cfg);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Scenario init_scenario(const ScenarioConfig& cfg) {
  check_config(cfg);
  Scenario sc;
  sc.grid = make_grid(cfg.N, cfg.R_outer);
  const bool swirl = has_swirl(cfg.phys.geometry);
  sc.state = FluidState::zeros(sc.grid.size(), swirl);
  for (std::size_t i = 0; i < sc.grid.size(); ++i) {
    const double r = sc.grid.nodes[i];
    sc.state.rho[i] = cfg.rho(r);
    sc.state.u[i] = cfg.u(r);
    sc.state.P[i] = cfg.P(r);
    sc.state.B[i] = cfg.B(r);
    if (swirl) {
      sc.state.v[i] = cfg.v ? (*cfg.v)(r) : 0.0;
      sc.state.w[i] = cfg.w ? (*cfg.w)(r) : 0.0;
    }
  }
  pin_boundaries(sc.state, cfg.phys.geometry);
  for (std::size_t i = 0; i < sc.grid.size(); ++i) {
    if (sc.state.rho[i] < 0.0 || sc.state.P[i] < 0.0)
      throw ConfigError("initial rho and P must be nonnegative (node " + std::to_string(i) + ")");
  }
  sc.rho_max = *std::max_element(sc.state.rho.begin(), sc.state.rho.end());
  cfg.solver.validate(sc.rho_max);

  if (cfg.r0) {
    const double r0 = *cfg.r0;
    if (!(r0 > 0.0) || r0 >= cfg.R_outer)
      throw ConfigError("initial.r0 must lie in (0, R_outer)");
    // Profiles must vanish on [0, r0]; check the nodes and r0 itself.
    auto offending = [&](double r) { return cfg.rho(r) != 0.0 || cfg.P(r) != 0.0; };
    for (std::size_t i = 0; i < sc.grid.size() && sc.grid.nodes[i] <= r0; ++i) {
      if (offending(sc.grid.nodes[i]))
        throw ConfigError("rho0 or P0 nonzero inside the vacuum core at r = " +
                          std::to_string(sc.grid.nodes[i]));
    }
    if (offending(r0)) throw ConfigError("rho0 or P0 nonzero at r0");
    VacuumFront f{r0, r0, 0.0};
    f.C0 = vacuum_flux(sc.state, f, sc.grid);
    if (!(std::abs(f.C0) >= 1e-12)) throw ConfigError("degenerate vacuum flux: |C0| < 1e-12");
    sc.front = f;
  }
  if (const std::string bad = invariant_violation(sc.state, cfg.phys.geometry); !bad.empty())
    throw ConfigError("initial state: " + bad);
  return sc;
}

}  // namespace mhdlab
