#include "hydroblow/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hydroblow/errors.hpp"

namespace hydroblow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail_at(const std::string& path, int line,
                          const std::string& what) {
  throw config_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& path, int line, const std::string& key,
                    const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail_at(path, line, "key '" + key + "' needs a number, got '" + v + "'");
  return x;
}

long parse_long(const std::string& path, int line, const std::string& key,
                const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail_at(path, line, "key '" + key + "' needs an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& path, int line, const std::string& key,
                const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail_at(path, line, "key '" + key + "' needs on/off, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& path, int line,
                               const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail_at(path, line, "key '" + key + "' has an empty item");
    out.push_back(parse_double(path, line, key, item));
  }
  if (out.empty()) fail_at(path, line, "key '" + key + "' needs a list");
  return out;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw runtime_failure("cannot write " + p.string());
  os << body;
  if (!os) throw runtime_failure("short write on " + p.string());
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format17(v);
}

}  // namespace

std::string format17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

loaded_config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config " + path);
  loaded_config lc;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(path, line, "expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(path, line, "empty key");
    if (val.empty()) fail_at(path, line, "key '" + key + "' has no value");
    if (!seen.insert(key).second) fail_at(path, line, "duplicate key '" + key + "'");
    lc.entries.push_back({key, val, line});
  }

  scenario_spec& sp = lc.spec;
  bool pressure_key = false, mean_key = false;
  bool pressure_val = true;
  mean_mode mean_val = mean_mode::projected;
  for (const auto& e : lc.entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    const int ln = e.line;
    if (k == "kind") {
      try {
        sp.kind = scenario_kind_from_string(v);
      } catch (const config_error& err) {
        fail_at(path, ln, err.what());
      }
    } else if (k == "beta") {
      sp.beta = parse_double(path, ln, k, v);
    } else if (k == "lambda0") {
      sp.lambda0 = parse_double(path, ln, k, v);
    } else if (k == "nu0") {
      sp.nu0 = parse_double(path, ln, k, v);
    } else if (k == "nu0_tilde") {
      sp.nu0_tilde = parse_double(path, ln, k, v);
    } else if (k == "nu0_tilde_star") {
      sp.nu0_tilde_star = parse_double(path, ln, k, v);
    } else if (k == "kappa") {
      sp.kappa = parse_double(path, ln, k, v);
    } else if (k == "perturbation.m") {
      sp.perturbation_m = static_cast<int>(parse_long(path, ln, k, v));
    } else if (k == "grid.n") {
      const long n = parse_long(path, ln, k, v);
      if (n < 1) fail_at(path, ln, "grid.n must be positive");
      sp.grid_n = static_cast<std::size_t>(n);
    } else if (k == "grid.g") {
      sp.grid_g = parse_double(path, ln, k, v);
    } else if (k == "solver.cfl") {
      sp.solver.cfl = parse_double(path, ln, k, v);
    } else if (k == "solver.pressure") {
      pressure_key = true;
      pressure_val = parse_bool(path, ln, k, v);
      sp.solver.pressure_on = pressure_val;
    } else if (k == "solver.mean_mode") {
      mean_key = true;
      if (v == "literal") {
        mean_val = mean_mode::literal;
      } else if (v == "projected") {
        mean_val = mean_mode::projected;
      } else {
        fail_at(path, ln, "solver.mean_mode needs literal or projected");
      }
      sp.solver.mean = mean_val;
    } else if (k == "solver.sup_stop") {
      sp.sup_stop_mult = parse_double(path, ln, k, v);
    } else if (k == "solver.max_steps") {
      sp.solver.max_steps = parse_long(path, ln, k, v);
    } else if (k == "horizon") {
      sp.horizon = parse_double(path, ln, k, v);
    } else if (k == "steady.k") {
      sp.steady_k = static_cast<int>(parse_long(path, ln, k, v));
    } else if (k == "exact.T") {
      sp.exact_T = parse_double(path, ln, k, v);
    } else if (k == "oracle.particles") {
      const long n = parse_long(path, ln, k, v);
      if (n < 0) fail_at(path, ln, "oracle.particles must be >= 0");
      sp.oracle_particles = static_cast<std::size_t>(n);
    } else if (k == "oracle.sup_mult") {
      sp.oracle_sup_mult = parse_double(path, ln, k, v);
    } else if (k == "fit.window_frac") {
      sp.fit_window_frac = parse_double(path, ln, k, v);
    } else if (k == "energy.eta") {
      sp.energy_eta = parse_double(path, ln, k, v);
    } else if (k == "energy.zstar") {
      sp.energy_zstar = parse_double(path, ln, k, v);
    } else if (k == "energy.K") {
      sp.energy_bigK = parse_double(path, ln, k, v);
    } else if (k == "outputs.dir") {
      sp.out_dir = v;
    } else if (k == "sweep.kappas") {
      lc.sweep_kappas = parse_list(path, ln, k, v);
    } else if (k == "sweep.lambda0s") {
      lc.sweep_lambda0s = parse_list(path, ln, k, v);
    } else {
      fail_at(path, ln, "unknown key '" + k + "'");
    }
  }

  if (sp.kind == scenario_kind::pressureless_exact) {
    if (pressure_key && pressure_val)
      throw config_error(path +
                         ": pressureless_exact kind runs with solver.pressure = off");
    if (mean_key && mean_val == mean_mode::projected)
      throw config_error(path +
                         ": pressureless_exact kind runs with solver.mean_mode = literal");
  }

  lc.raw = sp;
  apply_defaults(sp);
  validate(sp);
  return lc;
}

std::filesystem::path resolve_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("HYDROBLOW_OUT"); root && *root)
      return std::filesystem::path(root) / p;
  }
  return p;
}

void write_snapshots_csv(const std::filesystem::path& p, const trajectory& traj) {
  std::string body = "t,Z,a\n";
  for (const auto& f : traj.snapshots) {
    const std::string ts = format17(f.time);
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      body += ts;
      body += ',';
      body += format17(f.mesh.nodes[j]);
      body += ',';
      body += format17(f.values[j]);
      body += '\n';
    }
  }
  write_text(p, body);
}

void write_norms_csv(const std::filesystem::path& p, const trajectory& traj) {
  std::string body = "t,sup,dZa0,mean,dt\n";
  for (const auto& r : traj.norms) {
    body += format17(r.t);
    body += ',';
    body += format17(r.sup);
    body += ',';
    body += format17(r.dza0);
    body += ',';
    body += format17(r.mean);
    body += ',';
    body += format17(r.dt);
    body += '\n';
  }
  write_text(p, body);
}

void write_modulation_csv(const std::filesystem::path& p,
                          const scenario_bundle& b) {
  std::string body = "t,s,lambda,nu,E1,E2,res_mod1,res_mod2\n";
  const std::size_t n = b.states.size();
  auto at = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t i = 0; i < n; ++i) {
    body += format17(b.states[i].t);
    body += ',';
    body += format17(b.states[i].s);
    body += ',';
    body += format17(b.states[i].lambda);
    body += ',';
    body += format17(b.states[i].nu);
    body += ',';
    body += format17(at(b.E1, i));
    body += ',';
    body += format17(at(b.E2, i));
    body += ',';
    body += format17(at(b.res1, i));
    body += ',';
    body += format17(at(b.res2, i));
    body += '\n';
  }
  write_text(p, body);
}

void write_fits_json(const std::filesystem::path& p, const fit_summary& fits) {
  std::string body = "{\n";
  body += "  \"T\": " + json_number(fits.T) + ",\n";
  body += "  \"r2\": " + json_number(fits.r2) + ",\n";
  body += "  \"beta_hat\": " + json_number(fits.beta_hat) + ",\n";
  body += "  \"nu_inf\": " + json_number(fits.nu_inf) + ",\n";
  body += "  \"log_law_tail\": " + json_number(fits.log_law_tail) + ",\n";
  body += "  \"decay_slopes\": {\"E1\": " + json_number(fits.decay_slope_E1) +
          ", \"E2\": " + json_number(fits.decay_slope_E2) + "}\n";
  body += "}\n";
  write_text(p, body);
}

void write_verdicts_json(const std::filesystem::path& p,
                         const std::vector<verdict>& vs) {
  std::string body = "[\n";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    body += "  {\"claim\": \"" + json_escape(v.claim) + "\", \"pass\": ";
    body += v.pass ? "true" : "false";
    body += ", \"measured\": " + json_number(v.measured);
    body += ", \"target\": " + json_number(v.target);
    body += ", \"tolerance\": " + json_number(v.tolerance) + "}";
    if (i + 1 < vs.size()) body += ",";
    body += "\n";
  }
  body += "]\n";
  write_text(p, body);
}

void write_manifest_json(const std::filesystem::path& p, const run_manifest& m) {
  std::string body = "{\n";
  body += "  \"command\": \"" + json_escape(m.command) + "\",\n";
  body += "  \"version\": \"" + json_escape(m.version) + "\",\n";
  body += "  \"config\": {";
  for (std::size_t i = 0; i < m.config_echo.size(); ++i) {
    body += "\"" + json_escape(m.config_echo[i].key) + "\": \"" +
            json_escape(m.config_echo[i].value) + "\"";
    if (i + 1 < m.config_echo.size()) body += ", ";
  }
  body += "},\n";
  body += "  \"outputs\": [";
  for (std::size_t i = 0; i < m.outputs.size(); ++i) {
    body += "\"" + json_escape(m.outputs[i]) + "\"";
    if (i + 1 < m.outputs.size()) body += ", ";
  }
  body += "],\n";
  body += "  \"wall_time_seconds\": " + json_number(m.wall_seconds) + ",\n";
  body += "  \"verdicts\": {\"passed\": " + std::to_string(m.verdicts_passed) +
          ", \"failed\": " + std::to_string(m.verdicts_failed) + "}\n";
  body += "}\n";
  write_text(p, body);
}

}  // namespace hydroblow
