#include "hydroblow/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <ostream>
#include <vector>

#include "hydroblow/characteristics.hpp"
#include "hydroblow/errors.hpp"
#include "hydroblow/modulation.hpp"
#include "hydroblow/numerics.hpp"
#include "hydroblow/pde.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/scaling.hpp"
#include "hydroblow/scenario.hpp"

namespace hydroblow {

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

scenario_spec smooth_spec(double kappa) {
  scenario_spec sp;
  sp.kind = scenario_kind::smooth;
  sp.grid_n = 512;
  sp.grid_g = 2;  // clusters enough cells inside the initial focal scale
  sp.kappa = kappa;
  sp.perturbation_m = 1;
  return sp;
}

const verdict* find_verdict(const scenario_bundle& b, const char* claim) {
  for (const auto& v : b.verdicts)
    if (v.claim == claim) return &v;
  return nullptr;
}

// Expensive shared runs, built once on first use.
struct lab {
  std::optional<scenario_bundle> smooth0;
  double smooth0_seconds = 0;

  const scenario_bundle& smooth() {
    if (!smooth0) {
      const auto t0 = std::chrono::steady_clock::now();
      smooth0 = run_scenario(smooth_spec(0));
      smooth0_seconds = seconds_since(t0);
    }
    return *smooth0;
  }
};

criterion_result c1_profile_residual() {
  criterion_result r;
  r.index = 1;
  r.name = "profile residual";
  double worst = 0;
  for (double beta : {0.25, 0.5, 1.0, 2.0}) {
    profile_spec ps;
    ps.beta = beta;
    const profile prof(ps);
    for (int i = 0; i < 50; ++i) {
      const double z =
          std::exp(std::log(1e-3) + i / 49.0 * std::log(50 / 1e-3));
      worst = std::max(worst, std::abs(prof.residual(z)));
    }
  }
  profile_spec p0s;
  p0s.beta = 0;
  const profile p0(p0s);
  double worst0 = 0;
  for (int i = 0; i < 50; ++i) {
    const double z = std::exp(std::log(1e-3) + i / 49.0 * std::log(50 / 1e-3));
    worst0 = std::max(worst0,
                      std::abs(p0.phi(z) - std::exp(-z)) / std::exp(-z));
  }
  r.pass = worst < 1e-8 && worst0 <= 1e-15;
  r.detail = strf("max |residual| %.2e over beta {0.25,0.5,1,2} (tol 1e-8); "
                  "beta=0 vs exp(-z) rel %.2e",
                  worst, worst0);
  return r;
}

criterion_result c2_profile_asymptotics() {
  criterion_result r;
  r.index = 2;
  r.name = "profile asymptotics";
  bool ok = true;
  std::string smallz, spreads;
  for (double beta : {0.5, 1.0, 2.0}) {
    profile_spec ps;
    ps.beta = beta;
    const profile prof(ps);
    const double z = 1e-4;
    const double ratio = (1 - prof.phi(z)) / std::pow(z, 1 / (beta + 1));
    if (!(ratio >= 0.98 && ratio <= 1.02)) ok = false;
    smallz += strf(" %.5f", ratio);
    profile_spec pt = ps;
    pt.xi_max = 1e12;  // keeps z = 1e5 inside the parametric range at beta 1/2
    const profile tail(pt);
    double v[3];
    int i = 0;
    for (double zt : {1e3, 1e4, 1e5})
      v[i++] = tail.phi(zt) * std::pow(zt, 1 / beta);
    // ladder spread relative to the middle rung
    const double spread = (v[2] - v[0]) / v[1];
    if (!(spread < 1e-3)) ok = false;
    spreads += strf(" %.2e", spread);
  }
  r.pass = ok;
  r.detail = strf("(1-phi)/z^(1/(b+1)) at z=1e-4 for b={0.5,1,2}:%s "
                  "(window [0.98,1.02]); tail spreads%s (tol 1e-3)",
                  smallz.c_str(), spreads.c_str());
  return r;
}

criterion_result c3_pressure_constant() {
  criterion_result r;
  r.index = 3;
  r.name = "pressure constant";
  const double err = std::abs(pressure_constant(0) - 1.0);
  r.pass = err <= 1e-10;
  r.detail = strf("|pressure_constant(0) - 1| = %.2e (tol 1e-10)", err);
  return r;
}

criterion_result c4_steady_drift() {
  criterion_result r;
  r.index = 4;
  r.name = "steady-state drift";
  bool ok = true;
  std::string parts;
  for (int k = 1; k <= 3; ++k) {
    scenario_spec sp;
    sp.kind = scenario_kind::steady_state;
    sp.steady_k = k;
    sp.grid_n = 512;
    sp.horizon = 5;
    sp.sup_stop_mult = 1e6;
    const scenario_bundle b = run_scenario(sp);
    const verdict* v = find_verdict(b, "steady state drift");
    const double drift = v ? v->measured : HUGE_VAL;
    const bool held = v && v->pass;
    if (!held) ok = false;
    parts += strf(" k=%d drift %.2e%s", k, drift,
                  b.traj.reason == stop_reason::horizon ? "" : " (amplified)");
  }
  r.pass = ok;
  r.detail = strf("N=512 horizon 5, tol 1e-3:%s", parts.c_str());
  return r;
}

criterion_result c5_exact_tracking() {
  criterion_result r;
  r.index = 5;
  r.name = "pressureless exact tracking";
  double errs[3] = {0, 0, 0};
  const std::size_t ns[3] = {128, 256, 512};
  for (int i = 0; i < 3; ++i) {
    scenario_spec sp;
    sp.kind = scenario_kind::pressureless_exact;
    sp.beta = 1;
    sp.exact_T = 1;
    sp.grid_n = ns[i];
    const scenario_bundle b = run_scenario(sp);
    const verdict* v = find_verdict(b, "exact profile tracking error");
    errs[i] = v ? v->measured : HUGE_VAL;
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  r.pass = o1 >= 0.9 && o2 >= 0.9 && errs[2] < 1e-2;
  r.detail = strf("rel sup err %.2e/%.2e/%.2e at N=128/256/512, orders "
                  "%.2f/%.2f (need >= 0.9, final < 1e-2)",
                  errs[0], errs[1], errs[2], o1, o2);
  return r;
}

criterion_result c6_mean_conservation(lab& L) {
  criterion_result r;
  r.index = 6;
  r.name = "mean conservation";
  const verdict* v = find_verdict(L.smooth(), "projected mean at machine zero");
  const double proj = v ? v->measured : HUGE_VAL;

  grid mesh = grid::graded(64, 1.0);
  field f0{std::move(mesh), std::vector<double>(65, 0.5), 0};
  solver_config cfg;
  cfg.mean = mean_mode::literal;
  trajectory traj = run(f0, cfg, 1.0, {0, 1.0 / 32});
  const mean_report mr = mean_evolution_check(traj);
  const double mfin = traj.snapshots.back().mean();
  const double exact = 0.5 / (1 + 0.5 * 1.0);
  const double ferr = std::abs(mfin - exact);

  r.pass = proj <= 1e-12 && mr.ode_max_error <= 1e-3 && ferr <= 1e-6;
  r.detail = strf("projected max |mean|/sup %.2e (tol 1e-12); literal ODE "
                  "dev %.2e (tol 1e-3), final mean err %.2e (tol 1e-6)",
                  proj, mr.ode_max_error, ferr);
  return r;
}

criterion_result c7_characteristics_oracle() {
  criterion_result r;
  r.index = 7;
  r.name = "characteristics oracle";
  scenario_spec sp = smooth_spec(0);
  sp.grid_g = 1;
  apply_defaults(sp);
  validate(sp);
  profile_spec ps;
  ps.beta = 0;
  const profile prof(ps);
  const initial_data init = build_initial(sp, prof);
  solver_config cfg = sp.solver;
  cfg.sup_stop = 10 * init.sup0;
  const trajectory traj = run(init.f0, cfg, 1.0);
  const double t_end = traj.norms.back().t;
  solver_config cfg_char = sp.solver;  // no sup stop: march to t_end exactly
  const particle_set pset =
      integrate_characteristics(init.f0, init.f0.values.size(), t_end, cfg_char);
  const double disc = compare_to_eulerian(pset, traj.snapshots.back());
  const double rel = disc / traj.snapshots.back().sup();
  r.pass = rel < 1e-2;
  r.detail = strf("sup discrepancy %.2e relative to sup|a| at 10x initial "
                  "(tol 1e-2), N=n=512",
                  rel);
  return r;
}

criterion_result c8_nonsmooth_rates() {
  criterion_result r;
  r.index = 8;
  r.name = "power-law rate recovery";
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string parts;
  for (double beta : {0.5, 1.0}) {
    scenario_spec sp;
    sp.kind = scenario_kind::nonsmooth;
    sp.beta = beta;
    sp.grid_n = 512;
    const scenario_bundle b = run_scenario(sp);
    const double bdev = std::abs(b.fits.beta_hat - beta) / beta;
    const double hshift = std::abs(b.fits.T - b.fits.T_half) / b.fits.T;
    if (!(bdev <= 0.10 && hshift <= 0.02)) ok = false;
    parts += strf(" beta=%g: beta_hat %.4f (%.1f%% off), T shift %.1e;", beta,
                  b.fits.beta_hat, 100 * bdev, hshift);
  }
  const double el = seconds_since(t0);
  r.pass = ok && el <= 600;
  r.detail = strf("%s %.0fs (budget 600s)", parts.c_str(), el);
  return r;
}

criterion_result c9_smooth_log_law(lab& L) {
  criterion_result r;
  r.index = 9;
  r.name = "logarithmic scale law";
  const scenario_bundle& b = L.smooth();
  const smooth_checks c = smooth_window_checks(b);
  const double t_end = b.traj.norms.back().t;
  const bool fit_ok = std::isfinite(b.fits.T) && b.fits.T > t_end;
  const bool q_ok = c.n_window >= 3 && c.q_lo >= 0.5 && c.q_hi <= 1.5;
  const bool mono_ok = c.q_min_increment > -1e-9 && c.q_toward_one;
  const bool lr_ok = c.lr_lo >= 0.8 && c.lr_hi <= 1.2;
  r.pass = fit_ok && q_ok && mono_ok && lr_ok && L.smooth0_seconds <= 600;
  r.detail = strf("T %.6e; nu|log(T-t)| in [%.3f,%.3f] monotone=%d toward "
                  "1=%d; lambda/(T-t) in [%.3f,%.3f]; run %.0fs",
                  b.fits.T, c.q_lo, c.q_hi, c.q_min_increment > -1e-9 ? 1 : 0,
                  c.q_toward_one ? 1 : 0, c.lr_lo, c.lr_hi, L.smooth0_seconds);
  return r;
}

criterion_result c10_modulation_residuals(lab& L) {
  criterion_result r;
  r.index = 10;
  r.name = "modulation identities";
  const scenario_bundle& b = L.smooth();
  double m1 = 0, m2 = 0;
  for (std::size_t i = 1; i + 1 < b.res1.size(); ++i) {
    if (std::isfinite(b.res1[i])) m1 = std::max(m1, b.res1[i]);
    if (std::isfinite(b.res2[i])) m2 = std::max(m2, b.res2[i]);
  }
  r.pass = b.res1.size() >= 3 && m1 < 0.2 && m2 < 0.2;
  r.detail = strf("max relative residuals %.4f and %.4f vs 2 nu int(phi+eps)^2 "
                  "(tol 0.20)",
                  m1, m2);
  return r;
}

criterion_result c11_perturbation_decay(lab& L) {
  criterion_result r;
  r.index = 11;
  r.name = "perturbation decay";
  const scenario_bundle& base = L.smooth();
  static const char* blowup_claims[] = {
      "finite-time blow-up fit", "nu log-law window",
      "nu log-law monotone approach", "lambda linear-rate window"};
  bool ok = true;
  std::string parts;
  for (double kappa : {1e-2, 1e-1}) {
    const scenario_bundle b = run_scenario(smooth_spec(kappa));
    const verdict* dec = find_verdict(b, "outer remainder nonincreasing");
    const verdict* slope = find_verdict(b, "outer remainder decay slope");
    bool same = true;
    for (const char* claim : blowup_claims) {
      const verdict* v0 = find_verdict(base, claim);
      const verdict* v1 = find_verdict(b, claim);
      if (!v0 || !v1 || v0->pass != v1->pass) same = false;
    }
    const bool this_ok = dec && dec->pass && slope && slope->pass && same;
    if (!this_ok) ok = false;
    parts += strf(" kappa=%g: E2 slope %.3f nonincreasing=%d verdicts "
                  "unchanged=%d;",
                  kappa, slope ? slope->measured : 0.0,
                  dec && dec->pass ? 1 : 0, same ? 1 : 0);
  }
  r.pass = ok;
  r.detail = strf("%s slope bar -0.3", parts.c_str());
  return r;
}

criterion_result c12_momentum_reduction() {
  criterion_result r;
  r.index = 12;
  r.name = "2D momentum reduction";
  std::vector<double> x(65);
  for (int i = 0; i < 65; ++i) x[i] = -1.0 + 2.0 * i / 64;
  double res[3] = {0, 0, 0}, div_worst = 0, sup0 = 0;
  const std::size_t ns[3] = {128, 256, 512};
  for (int i = 0; i < 3; ++i) {
    scenario_spec sp = smooth_spec(0);
    sp.grid_g = 1;
    sp.grid_n = ns[i];
    apply_defaults(sp);
    validate(sp);
    profile_spec ps;
    ps.beta = 0;
    const profile prof(ps);
    const initial_data init = build_initial(sp, prof);
    const std::vector<double> rate = rhs(init.f0, sp.solver);
    const lift2d Lf = lift_to_2d(init.f0, x);
    res[i] = momentum_residual(Lf, init.f0, rate);
    div_worst = std::max(div_worst, divergence_residual(Lf));
    sup0 = std::max(sup0, init.sup0);
  }
  const double q1 = res[1] / res[0], q2 = res[2] / res[1];
  const bool div_ok = div_worst <= 1e-9 * sup0;
  r.pass = q1 >= 0.4 && q1 <= 0.6 && q2 >= 0.4 && q2 <= 0.6 && div_ok;
  r.detail = strf("residual %.3e/%.3e/%.3e at N=128/256/512, ratios %.3f/%.3f "
                  "(window [0.4,0.6]); max divergence %.1e",
                  res[0], res[1], res[2], q1, q2, div_worst);
  return r;
}

criterion_result c13_fitter_exactness() {
  criterion_result r;
  r.index = 13;
  r.name = "fitter exactness";
  std::vector<double> ts(100), sups(100), nus(100);
  for (int i = 0; i < 100; ++i) {
    ts[i] = 0.9 * i / 99;
    sups[i] = 1 / (1 - ts[i]);
    nus[i] = 0.5 * std::pow(1 - ts[i], 0.7);
  }
  const blowup_fit bf = fit_blowup_time(ts, sups, 0.25);
  const bool b_ok = std::abs(bf.T - 1) <= 1e-6 && 1 - bf.r2 <= 1e-10;

  const scale_law_fit pf = fit_nu_law(ts, nus, 1.0, nu_law::power);
  const bool p_ok = std::abs(pf.exponent_or_limit - 0.7) <= 1e-6 &&
                    std::abs(pf.nu_inf - 0.5) <= 1e-6 && pf.residual <= 1e-10;

  std::vector<double> tl(50), nl(50);
  for (int i = 0; i < 50; ++i) {
    tl[i] = 0.5 + 0.4 * i / 49;
    nl[i] = 1 / std::abs(std::log(1 - tl[i]));
  }
  const scale_law_fit lf = fit_nu_law(tl, nl, 1.0, nu_law::log_law);
  const bool l_ok =
      std::abs(lf.exponent_or_limit - 1) <= 1e-6 && lf.residual <= 1e-10;

  std::vector<double> ss(50), ee(50), pe(50), logs(50), loge(50), logpe(50);
  for (int i = 0; i < 50; ++i) {
    ss[i] = 1 + 9.0 * i / 49;
    ee[i] = std::exp(-0.8 * ss[i]);
    pe[i] = std::pow(ss[i], -2.0 / 3.0);
    logs[i] = std::log(ss[i]);
    loge[i] = std::log(ee[i]);
    logpe[i] = std::log(pe[i]);
  }
  const double se = fit_remainder_decay(ss, ee, decay_law::exp_law);
  const double sp = fit_remainder_decay(ss, pe, decay_law::power_law);
  const double rms_e = linear_regression(ss, loge).rms_residual;
  const double rms_p = linear_regression(logs, logpe).rms_residual;
  const bool d_ok = std::abs(se + 0.8) <= 1e-6 && rms_e <= 1e-10 &&
                    std::abs(sp + 2.0 / 3.0) <= 1e-6 && rms_p <= 1e-10;

  r.pass = b_ok && p_ok && l_ok && d_ok;
  r.detail = strf("blow-up T err %.1e; power (%.1e, %.1e); log tail err %.1e; "
                  "decay slopes err (%.1e, %.1e); residuals all <= 1e-10: %d",
                  std::abs(bf.T - 1), std::abs(pf.exponent_or_limit - 0.7),
                  std::abs(pf.nu_inf - 0.5), std::abs(lf.exponent_or_limit - 1),
                  std::abs(se + 0.8), std::abs(sp + 2.0 / 3.0),
                  (1 - bf.r2 <= 1e-10 && pf.residual <= 1e-10 &&
                   lf.residual <= 1e-10 && rms_e <= 1e-10 && rms_p <= 1e-10)
                      ? 1
                      : 0);
  return r;
}

}  // namespace

std::vector<criterion_result> run_acceptance(std::ostream& log) {
  lab L;
  std::vector<criterion_result> rs;
  const auto push = [&](criterion_result r) {
    log << strf("criterion %2d %s %s: %s\n", r.index, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    log.flush();
    rs.push_back(std::move(r));
  };
  const auto guard = [&](int idx, const char* name, auto&& fn) {
    try {
      push(fn());
    } catch (const std::exception& e) {
      push({idx, name, false, strf("error: %s", e.what())});
    }
  };
  guard(1, "profile residual", [] { return c1_profile_residual(); });
  guard(2, "profile asymptotics", [] { return c2_profile_asymptotics(); });
  guard(3, "pressure constant", [] { return c3_pressure_constant(); });
  guard(4, "steady-state drift", [] { return c4_steady_drift(); });
  guard(5, "pressureless exact tracking", [] { return c5_exact_tracking(); });
  guard(6, "mean conservation", [&] { return c6_mean_conservation(L); });
  guard(7, "characteristics oracle", [] { return c7_characteristics_oracle(); });
  guard(8, "power-law rate recovery", [] { return c8_nonsmooth_rates(); });
  guard(9, "logarithmic scale law", [&] { return c9_smooth_log_law(L); });
  guard(10, "modulation identities",
        [&] { return c10_modulation_residuals(L); });
  guard(11, "perturbation decay", [&] { return c11_perturbation_decay(L); });
  guard(12, "2D momentum reduction", [] { return c12_momentum_reduction(); });
  guard(13, "fitter exactness", [] { return c13_fitter_exactness(); });
  log << acceptance_summary(rs) << "\n";
  return rs;
}

std::string acceptance_summary(const std::vector<criterion_result>& rs) {
  int passed = 0;
  std::string failed_list;
  for (const auto& r : rs) {
    if (r.pass) {
      ++passed;
    } else {
      if (!failed_list.empty()) failed_list += ", ";
      failed_list += std::to_string(r.index);
    }
  }
  const int failed = int(rs.size()) - passed;
  std::string s = strf("acceptance: %d passed, %d failed", passed, failed);
  if (failed > 0) s += " (criteria " + failed_list + ")";
  return s;
}

int acceptance_exit_code(const std::vector<criterion_result>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return 4;
  return 0;
}

}  // namespace hydroblow
