#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "hydroblow/acceptance.hpp"
#include "hydroblow/characteristics.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"
#include "hydroblow/numerics.hpp"
#include "hydroblow/pde.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/scenario.hpp"

namespace hb = hydroblow;

namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw hb::runtime_failure("cannot write " + p.string());
  os << body;
  if (!os) throw hb::runtime_failure("short write on " + p.string());
}

const char* stop_name(hb::stop_reason r) {
  switch (r) {
    case hb::stop_reason::horizon: return "horizon";
    case hb::stop_reason::sup_stop: return "sup_stop";
    case hb::stop_reason::max_steps: return "max_steps";
    case hb::stop_reason::overflow: return "overflow";
  }
  return "?";
}

void print_verdicts(const std::vector<hb::verdict>& vs) {
  for (const auto& v : vs)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.claim << ": measured "
              << hb::format17(v.measured) << ", target "
              << hb::format17(v.target) << ", tolerance "
              << hb::format17(v.tolerance) << "\n";
}

struct emit_plan {
  bool snapshots = false, norms = false, modulation = false;
  bool fits = false, verdicts = false;
};

void emit_bundle(const hb::scenario_bundle& b, const std::filesystem::path& dir,
                 const emit_plan& plan, hb::run_manifest& m) {
  std::filesystem::create_directories(dir);
  const auto emit = [&](const char* name, auto&& writer) {
    const auto p = dir / name;
    writer(p);
    m.outputs.push_back(p.string());
  };
  if (plan.snapshots)
    emit("snapshots.csv", [&](const auto& p) { hb::write_snapshots_csv(p, b.traj); });
  if (plan.norms)
    emit("norms.csv", [&](const auto& p) { hb::write_norms_csv(p, b.traj); });
  if (plan.modulation)
    emit("modulation.csv", [&](const auto& p) { hb::write_modulation_csv(p, b); });
  if (plan.fits)
    emit("fits.json", [&](const auto& p) { hb::write_fits_json(p, b.fits); });
  if (plan.verdicts)
    emit("verdicts.json", [&](const auto& p) { hb::write_verdicts_json(p, b.verdicts); });
  for (const auto& v : b.verdicts) (v.pass ? m.verdicts_passed : m.verdicts_failed)++;
}

void finish_manifest(const std::filesystem::path& dir, hb::run_manifest& m,
                     std::chrono::steady_clock::time_point t0) {
  const auto mp = dir / "manifest.json";
  m.outputs.push_back(mp.string());
  m.wall_seconds = seconds_since(t0);
  hb::write_manifest_json(mp, m);
}

int cmd_profile(double beta, double zmin, double zmax, int points) {
  if (beta < 0) throw hb::config_error("beta >= 0 required");
  if (zmin < 0) throw hb::usage_error("--zmin must be >= 0");
  if (zmax <= zmin) throw hb::usage_error("--zmax must exceed --zmin");
  hb::profile_spec ps;
  ps.beta = beta;
  const hb::profile prof(ps);
  std::cout << "z,phi,phi_prime,psi,residual\n";
  for (int i = 0; i < points; ++i) {
    const double z = zmin + (zmax - zmin) * i / (points - 1);
    // phi_prime is one-sidedly singular at the origin for beta > 0; the
    // residual limit there is 0
    const bool origin = z == 0 && beta > 0;
    const double dp = origin ? -HUGE_VAL : prof.phi_prime(z);
    const double res = origin ? 0 : prof.residual(z);
    std::cout << hb::format17(z) << ',' << hb::format17(prof.phi(z)) << ','
              << hb::format17(dp) << ',' << hb::format17(prof.antideriv(z))
              << ',' << hb::format17(res) << "\n";
  }
  return 0;
}

int run_pipeline(const char* cmd, const std::string& cfg_path,
                 const emit_plan& plan) {
  const auto t0 = std::chrono::steady_clock::now();
  const hb::loaded_config lc = hb::load_config(cfg_path);
  const auto dir = hb::resolve_out_dir(lc.spec.out_dir);
  const hb::scenario_bundle b = hb::run_scenario(lc.spec);

  hb::run_manifest m;
  m.command = cmd;
  m.config_echo = lc.entries;
  emit_bundle(b, dir, plan, m);
  finish_manifest(dir, m, t0);

  std::cout << "kind " << hb::to_string(lc.spec.kind) << " beta "
            << hb::format17(lc.spec.beta) << " N " << lc.spec.grid_n << " g "
            << hb::format17(lc.spec.grid_g) << "\n";
  std::cout << "stopped: " << stop_name(b.traj.reason) << " at t "
            << hb::format17(b.traj.norms.back().t) << " after "
            << b.traj.norms.size() << " steps, sup "
            << hb::format17(b.traj.norms.back().sup) << "\n";
  if (std::isfinite(b.fits.T))
    std::cout << "blow-up fit: T " << hb::format17(b.fits.T) << " r2 "
              << hb::format17(b.fits.r2) << "\n";
  print_verdicts(b.verdicts);
  for (const auto& o : m.outputs) std::cout << "wrote " << o << "\n";
  return 0;
}

int cmd_oracle(const std::string& cfg_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const hb::loaded_config lc = hb::load_config(cfg_path);
  const auto dir = hb::resolve_out_dir(lc.spec.out_dir);
  std::filesystem::create_directories(dir);

  hb::profile_spec ps;
  ps.beta = lc.spec.beta;
  const hb::profile prof(ps);
  const hb::initial_data init = hb::build_initial(lc.spec, prof);
  hb::solver_config cfg = lc.spec.solver;
  // the cross-check stops at a moderate amplification; near blow-up the
  // Lagrangian solution diverges before the diffused grid run gets there
  cfg.sup_stop = lc.spec.oracle_sup_mult * init.sup0;
  const hb::trajectory traj = hb::run(init.f0, cfg, lc.spec.horizon);
  const hb::field& fe = traj.snapshots.back();

  const std::size_t n = lc.spec.oracle_particles ? lc.spec.oracle_particles
                                                 : init.f0.values.size();
  hb::solver_config cfg_char = lc.spec.solver;
  // a march that overshoots the comparison scale or needs far more steps
  // than the grid run has left the mutual-convergence regime; stop it early
  cfg_char.sup_stop = 10 * cfg.sup_stop;
  cfg_char.max_steps = std::min<long>(
      cfg_char.max_steps, 100 * static_cast<long>(traj.norms.size()) + 1000);
  const hb::particle_set pset =
      hb::integrate_characteristics(init.f0, n, fe.time, cfg_char);
  if (std::abs(pset.time - fe.time) > 1e-12 * std::max(1.0, std::abs(fe.time)))
    throw hb::runtime_failure(
        strf("oracle: particles stopped at t = %.9g before the grid run's "
             "t = %.9g; lower oracle.sup_mult",
             pset.time, fe.time));
  const double disc = hb::compare_to_eulerian(pset, fe);
  const double rel = disc / fe.sup();

  std::string body = "Z,a_particle,a_grid\n";
  for (std::size_t i = 0; i < pset.positions.size(); ++i) {
    body += hb::format17(pset.positions[i]);
    body += ',';
    body += hb::format17(pset.values[i]);
    body += ',';
    body += hb::format17(
        hb::lininterp(fe.mesh.nodes, fe.values, pset.positions[i]));
    body += '\n';
  }
  const auto op = dir / "oracle.csv";
  write_text(op, body);

  hb::run_manifest m;
  m.command = "oracle";
  m.config_echo = lc.entries;
  m.outputs.push_back(op.string());
  finish_manifest(dir, m, t0);

  std::cout << "eulerian stop: " << stop_name(traj.reason) << " at t "
            << hb::format17(fe.time) << " sup " << hb::format17(fe.sup())
            << "\n";
  std::cout << "particles: " << pset.positions.size() << " in "
            << pset.steps << " steps\n";
  std::cout << "sup discrepancy " << hb::format17(disc) << " ("
            << hb::format17(rel) << " relative)\n";
  for (const auto& o : m.outputs) std::cout << "wrote " << o << "\n";
  return 0;
}

bool blowup_claims_pass(const hb::scenario_bundle& b) {
  static const char* claims[] = {
      "finite-time blow-up fit", "nu log-law window",
      "nu log-law monotone approach", "lambda linear-rate window",
      "power-law exponent matches beta"};
  bool any = false, all = true;
  for (const char* c : claims)
    for (const auto& v : b.verdicts)
      if (v.claim == c) {
        any = true;
        all = all && v.pass;
      }
  return any && all;
}

int cmd_sweep(const std::string& cfg_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const hb::loaded_config lc = hb::load_config(cfg_path);
  const std::vector<double> kappas =
      lc.sweep_kappas.empty() ? std::vector<double>{lc.spec.kappa}
                              : lc.sweep_kappas;
  const std::vector<double> lambdas =
      lc.sweep_lambda0s.empty() ? std::vector<double>{lc.spec.lambda0}
                                : lc.sweep_lambda0s;
  const auto root = hb::resolve_out_dir(lc.spec.out_dir);
  std::filesystem::create_directories(root);

  struct job {
    double lambda0, kappa;
    hb::scenario_spec spec;
    std::filesystem::path dir;
  };
  std::vector<job> jobs;
  for (double l0 : lambdas)
    for (double k : kappas) {
      hb::scenario_spec sp = lc.raw;  // keep nu0 at its sentinel so it rederives
      sp.lambda0 = l0;
      sp.kappa = k;
      hb::apply_defaults(sp);
      hb::validate(sp);
      jobs.push_back(
          {l0, k, sp, root / strf("run_l%g_k%g", l0, k)});
    }

  std::vector<std::future<hb::scenario_bundle>> futures;
  futures.reserve(jobs.size());
  for (const auto& j : jobs)
    futures.push_back(std::async(std::launch::async,
                                 [spec = j.spec] { return hb::run_scenario(spec); }));

  hb::run_manifest top;
  top.command = "sweep";
  top.config_echo = lc.entries;
  std::string runs_json;
  std::vector<std::pair<double, double>> best;  // lambda0 -> largest passing kappa
  for (double l0 : lambdas) best.emplace_back(l0, -1);

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const hb::scenario_bundle b = futures[i].get();
    const job& j = jobs[i];
    hb::run_manifest m;
    m.command = "sweep";
    m.config_echo = lc.entries;
    m.config_echo.push_back({"run.lambda0", hb::format17(j.lambda0), 0});
    m.config_echo.push_back({"run.kappa", hb::format17(j.kappa), 0});
    emit_plan all;
    all.snapshots = all.norms = all.modulation = all.fits = all.verdicts = true;
    emit_bundle(b, j.dir, all, m);
    finish_manifest(j.dir, m, t0);
    top.outputs.push_back((j.dir / "manifest.json").string());
    top.verdicts_passed += m.verdicts_passed;
    top.verdicts_failed += m.verdicts_failed;

    const bool pass = blowup_claims_pass(b);
    if (pass)
      for (auto& [bl, bk] : best)
        if (bl == j.lambda0 && j.kappa > bk) bk = j.kappa;
    if (!runs_json.empty()) runs_json += ",\n";
    runs_json += strf(
        "    {\"lambda0\": %s, \"kappa\": %s, \"dir\": \"%s\", "
        "\"blowup_pass\": %s, \"verdicts\": {\"passed\": %d, \"failed\": %d}}",
        hb::format17(j.lambda0).c_str(), hb::format17(j.kappa).c_str(),
        j.dir.filename().string().c_str(), pass ? "true" : "false",
        m.verdicts_passed, m.verdicts_failed);
    std::cout << "run lambda0 " << hb::format17(j.lambda0) << " kappa "
              << hb::format17(j.kappa) << ": blow-up verdicts "
              << (pass ? "pass" : "FAIL") << "\n";
  }

  std::string body = "{\n  \"runs\": [\n" + runs_json + "\n  ],\n";
  body += "  \"largest_passing_kappa\": [\n";
  for (std::size_t i = 0; i < best.size(); ++i) {
    body += strf("    {\"lambda0\": %s, \"kappa\": %s}",
                 hb::format17(best[i].first).c_str(),
                 best[i].second < 0 ? "null"
                                    : hb::format17(best[i].second).c_str());
    if (i + 1 < best.size()) body += ",";
    body += "\n";
  }
  body += "  ]\n}\n";
  const auto sp = root / "sweep.json";
  write_text(sp, body);
  top.outputs.push_back(sp.string());
  finish_manifest(root, top, t0);

  for (const auto& [bl, bk] : best)
    std::cout << "largest passing kappa at lambda0 " << hb::format17(bl)
              << ": " << (bk < 0 ? std::string("none") : hb::format17(bk))
              << "\n";
  std::cout << "wrote " << sp.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laboratory for the reduced hydrostatic blow-up model"};
  app.require_subcommand(1);

  double beta = 0, zmin = 0, zmax = 1;
  int points = 2;
  auto* prof_cmd =
      app.add_subcommand("profile", "tabulate the blow-up profile as CSV");
  prof_cmd->add_option("--beta", beta, "profile family parameter");
  prof_cmd->add_option("--zmin", zmin, "first node (default 0)");
  prof_cmd->add_option("--zmax", zmax, "last node")->required();
  prof_cmd->add_option("--points", points, "node count")
      ->required()
      ->check(CLI::Range(2, 10000000));

  std::string cfg;
  auto add_cfg = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("--config", cfg, "key=value config file")->required();
    return c;
  };
  auto* sim_cmd = add_cfg("simulate", "integrate and write snapshots and norms");
  auto* orc_cmd = add_cfg("oracle", "cross-check against characteristics");
  auto* mod_cmd = add_cfg("modulate", "simulate plus scale extraction");
  auto* fit_cmd = add_cfg("fit", "simulate plus blow-up and scale-law fits");
  auto* scn_cmd = add_cfg("scenario", "full pipeline with verdicts");
  auto* swp_cmd = add_cfg("sweep", "fan out over sweep.kappas x sweep.lambda0s");
  auto* acc_cmd = app.add_subcommand("accept", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*prof_cmd) return cmd_profile(beta, zmin, zmax, points);
    if (*sim_cmd) {
      emit_plan p;
      p.snapshots = p.norms = true;
      return run_pipeline("simulate", cfg, p);
    }
    if (*orc_cmd) return cmd_oracle(cfg);
    if (*mod_cmd) {
      emit_plan p;
      p.snapshots = p.norms = p.modulation = true;
      return run_pipeline("modulate", cfg, p);
    }
    if (*fit_cmd) {
      emit_plan p;
      p.norms = p.fits = true;
      return run_pipeline("fit", cfg, p);
    }
    if (*scn_cmd) {
      emit_plan p;
      p.snapshots = p.norms = p.modulation = p.fits = p.verdicts = true;
      return run_pipeline("scenario", cfg, p);
    }
    if (*swp_cmd) return cmd_sweep(cfg);
    if (*acc_cmd) {
      const auto rs = hb::run_acceptance(std::cout);
      return hb::acceptance_exit_code(rs);
    }
  } catch (const hb::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const hb::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hb::runtime_failure& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
