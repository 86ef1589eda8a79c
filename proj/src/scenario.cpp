#include "hydroblow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

namespace {

constexpr double knan = std::numeric_limits<double>::quiet_NaN();
constexpr double kpi = std::numbers::pi;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

const char* to_string(scenario_kind k) {
  switch (k) {
    case scenario_kind::smooth: return "smooth";
    case scenario_kind::nonsmooth: return "nonsmooth";
    case scenario_kind::pressureless_exact: return "pressureless_exact";
    case scenario_kind::steady_state: return "steady_state";
    case scenario_kind::custom: return "custom";
  }
  return "?";
}

scenario_kind scenario_kind_from_string(const std::string& s) {
  if (s == "smooth") return scenario_kind::smooth;
  if (s == "nonsmooth") return scenario_kind::nonsmooth;
  if (s == "pressureless_exact") return scenario_kind::pressureless_exact;
  if (s == "steady_state") return scenario_kind::steady_state;
  if (s == "custom") return scenario_kind::custom;
  throw config_error("unknown kind '" + s + "'");
}

void apply_defaults(scenario_spec& spec) {
  switch (spec.kind) {
    case scenario_kind::smooth:
      if (spec.beta != 0) throw config_error("smooth kind requires beta = 0");
      if (spec.lambda0 == 0) spec.lambda0 = 1e-4;
      if (spec.nu0 == 0 && spec.lambda0 > 0 && spec.lambda0 < 1)
        spec.nu0 = 1.0 / std::log(1.0 / spec.lambda0);
      if (spec.grid_g == 0) spec.grid_g = 1;
      if (spec.horizon == 0) spec.horizon = 1;
      break;
    case scenario_kind::nonsmooth:
      if (!(spec.beta > 0)) throw config_error("nonsmooth kind requires beta > 0");
      if (spec.lambda0 == 0) spec.lambda0 = 1e-3;
      if (spec.nu0 == 0)
        spec.nu0 = spec.nu0_tilde * std::pow(spec.lambda0, spec.beta);
      if (spec.grid_g == 0) spec.grid_g = spec.beta + 1;
      if (spec.horizon == 0) spec.horizon = 1;
      break;
    case scenario_kind::pressureless_exact: {
      if (spec.beta == 0) spec.beta = 1;
      if (!(spec.beta > 0))
        throw config_error("pressureless_exact kind requires beta > 0");
      if (!(spec.exact_T > 0)) throw config_error("exact.T > 0 required");
      const double lam = spec.exact_T;
      const double nu = std::pow(spec.exact_T, spec.beta);
      if (spec.lambda0 != 0 && spec.lambda0 != lam)
        throw config_error("pressureless_exact kind derives lambda0 = exact.T");
      if (spec.nu0 != 0 && spec.nu0 != nu)
        throw config_error("pressureless_exact kind derives nu0 = exact.T^beta");
      spec.lambda0 = lam;
      spec.nu0 = nu;
      spec.solver.pressure_on = false;
      spec.solver.mean = mean_mode::literal;
      if (spec.grid_g == 0) spec.grid_g = spec.beta + 1;
      if (spec.horizon == 0) spec.horizon = spec.exact_T / 2;
      break;
    }
    case scenario_kind::steady_state:
      spec.beta = 0;
      if (spec.lambda0 == 0) spec.lambda0 = 1;
      if (spec.nu0 == 0) spec.nu0 = 1;
      if (spec.grid_g == 0) spec.grid_g = 1;
      if (spec.horizon == 0) spec.horizon = 5;
      break;
    case scenario_kind::custom:
      if (spec.lambda0 == 0) spec.lambda0 = 1e-4;
      if (spec.nu0 == 0) {
        if (spec.beta == 0) {
          if (spec.lambda0 > 0 && spec.lambda0 < 1)
            spec.nu0 = 1.0 / std::log(1.0 / spec.lambda0);
        } else {
          spec.nu0 = spec.nu0_tilde * std::pow(spec.lambda0, spec.beta);
        }
      }
      if (spec.grid_g == 0) spec.grid_g = spec.beta + 1;
      if (spec.horizon == 0) spec.horizon = 1;
      break;
  }
}

void validate(const scenario_spec& spec) {
  if (!(spec.beta >= 0) || !finite(spec.beta))
    throw config_error("beta >= 0 required");
  if (!(spec.lambda0 > 0)) throw config_error("lambda0 > 0 required");
  if (!(spec.nu0 > 0)) throw config_error("nu0 > 0 required");
  if (spec.kind == scenario_kind::smooth) {
    if (!(spec.lambda0 < 1))
      throw config_error("smooth kind requires lambda0 in (0,1)");
    const double L = std::log(1.0 / spec.lambda0);
    if (!(spec.nu0 >= 2 / (3 * L) && spec.nu0 <= 3 / (2 * L)))
      throw config_error(
          "smooth kind requires nu0 in [2/(3 log(1/lambda0)), 3/(2 log(1/lambda0))]");
  }
  if (!(spec.nu0_tilde_star > 0 && spec.nu0_tilde_star <= 1))
    throw config_error("nu0_tilde_star in (0,1] required");
  if (spec.kind == scenario_kind::nonsmooth) {
    const double nt = spec.nu0 / std::pow(spec.lambda0, spec.beta);
    if (!(nt > 0 && nt <= spec.nu0_tilde_star))
      throw config_error(
          "nonsmooth kind requires nu0 <= nu0_tilde_star * lambda0^beta");
  }
  if (!(spec.kappa >= 0)) throw config_error("kappa >= 0 required");
  if (spec.perturbation_m < 1) throw config_error("perturbation.m >= 1 required");
  if (spec.grid_n < 16) throw config_error("grid.n >= 16 required");
  if (!(spec.grid_g >= 1)) throw config_error("grid.g >= 1 required");
  if (!(spec.solver.cfl > 0 && spec.solver.cfl < 1))
    throw config_error("solver.cfl in (0,1) required");
  if (!(spec.sup_stop_mult > 1))
    throw config_error("solver.sup_stop multiplier > 1 required");
  if (spec.solver.max_steps < 1)
    throw config_error("solver.max_steps >= 1 required");
  if (!(spec.horizon > 0)) throw config_error("horizon > 0 required");
  if (spec.steady_k < 1) throw config_error("steady.k >= 1 required");
  if (!(spec.exact_T > 0)) throw config_error("exact.T > 0 required");
  if (spec.oracle_particles != 0 && spec.oracle_particles < 16)
    throw config_error("oracle.particles >= 16 required (0 uses the grid nodes)");
  if (!(spec.oracle_sup_mult > 1))
    throw config_error("oracle.sup_mult > 1 required");
  if (!(spec.fit_window_frac > 0 && spec.fit_window_frac <= 1))
    throw config_error("fit.window_frac in (0,1] required");
  if (spec.beta > 0)
    energy_config::for_beta(spec.beta,
                            spec.energy_eta > 0 ? spec.energy_eta : -1,
                            spec.energy_zstar, spec.energy_bigK);
  else
    energy_config::for_beta(0, -1, spec.energy_zstar, spec.energy_bigK);
}

initial_data build_initial(const scenario_spec& spec, const profile& prof) {
  if (prof.spec().beta != spec.beta)
    throw runtime_failure("build_initial: profile beta mismatch");
  initial_data out;
  grid mesh = grid::graded(spec.grid_n, spec.grid_g);
  const auto& Z = mesh.nodes;
  const std::size_t n = Z.size();
  std::vector<double> a0(n);
  if (spec.kind == scenario_kind::steady_state) {
    for (std::size_t j = 0; j < n; ++j)
      a0[j] = std::cos(2 * kpi * spec.steady_k * Z[j]);
  } else {
    for (std::size_t j = 0; j < n; ++j)
      a0[j] = prof.phi(Z[j] / spec.nu0) / spec.lambda0;
  }
  if (spec.kappa > 0) {
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = std::sin(kpi * Z[j]);
      b[j] = s * s * std::cos(2 * kpi * spec.perturbation_m * Z[j]);
    }
    std::vector<double> d1(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
      d1[j] = (b[j + 1] - b[j]) / (Z[j + 1] - Z[j]);
    double proxy = 0;
    for (double v : b) proxy = std::max(proxy, std::abs(v));
    for (double v : d1) proxy = std::max(proxy, std::abs(v));
    for (std::size_t j = 0; j + 2 < n; ++j)
      proxy = std::max(proxy,
                       std::abs((d1[j + 1] - d1[j]) / (0.5 * (Z[j + 2] - Z[j]))));
    out.perturbation_norm = proxy;
    for (std::size_t j = 0; j < n; ++j) a0[j] += spec.kappa * b[j] / proxy;
  }
  out.f0.mesh = std::move(mesh);
  out.f0.values = std::move(a0);
  out.f0.time = 0;
  if (spec.solver.mean == mean_mode::projected) {
    out.mean_correction = out.f0.mean();
    for (double& v : out.f0.values) v -= out.mean_correction;
  }
  out.sup0 = out.f0.sup();
  return out;
}

tail_band_fit extract_tail_band(const field& f, const profile_table& tbl,
                                double nu_seed) {
  if (!(f.values[0] > 0))
    throw runtime_failure("extract_tail_band: a(t,0) must be positive");
  if (!(nu_seed > 0))
    throw runtime_failure("extract_tail_band: nu_seed > 0 required");
  const auto& Z = f.mesh.nodes;
  const std::size_t n = Z.size();
  tail_band_fit out;
  out.lambda = 1.0 / f.values[0];
  double nu = nu_seed;
  double C = 0;
  for (int outer = 0; outer < 4; ++outer) {
    double sum = 0;
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (Z[j] < 0.75) continue;
      sum += out.lambda * f.values[j] - tbl(Z[j] / nu);
      ++cnt;
    }
    C = sum / double(cnt);
    std::vector<double> zm, ym;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = out.lambda * f.values[j] - C;
      if (Z[j] > 0 && v >= 0.01 && v <= 0.12) {
        zm.push_back(Z[j]);
        ym.push_back(std::log(v));
      }
    }
    if (zm.size() < 3) {
      out.nu = knan;
      out.offset = C;
      return out;
    }
    double m = std::log(nu);
    const double eps = 1e-6;
    for (int it = 0; it < 80; ++it) {
      double jr = 0, jj = 0;
      for (std::size_t i = 0; i < zm.size(); ++i) {
        const double r = ym[i] - std::log(tbl(zm[i] * std::exp(-m)));
        const double J = (std::log(tbl(zm[i] * std::exp(-(m + eps)))) -
                          std::log(tbl(zm[i] * std::exp(-(m - eps))))) /
                         (2 * eps);
        jr += J * r;
        jj += J * J;
      }
      if (!(jj > 0)) {
        out.nu = knan;
        out.offset = C;
        return out;
      }
      const double dm = jr / jj;
      m += std::clamp(dm, -1.0, 1.0);
      if (std::abs(dm) < 1e-13) break;
    }
    nu = std::exp(m);
  }
  out.nu = nu;
  out.offset = C;
  return out;
}

namespace {

// Shape inversion for the exact pressureless kind: the evolved field stays a
// rescaled profile at every node, so nu = Z / phi^{-1}(lambda a) can be read
// off the mid band 0.2 <= lambda a <= 0.8 where the inverse is well
// conditioned. Median over the band; NaN when under 3 nodes qualify.
double invert_shape_nu(const field& f, const profile& prof, double lambda) {
  std::vector<double> est;
  for (std::size_t j = 1; j < f.mesh.nodes.size(); ++j) {
    const double v = lambda * f.values[j];
    if (!(v >= 0.2 && v <= 0.8)) continue;
    const double z = prof.z_of_xi(1.0 / v - 1.0);
    if (z > 0) est.push_back(f.mesh.nodes[j] / z);
  }
  if (est.size() < 3) return knan;
  std::nth_element(est.begin(), est.begin() + est.size() / 2, est.end());
  return est[est.size() / 2];
}

// Per-snapshot scales plus the modulation-ODE cross-check, mirroring the
// rate-law verification recipe: nu seeds chain across snapshots, log nu_mod
// integrates -(beta + (beta+1) R)/lambda by trapezoid, and a sample is valid
// when the extracted nu agrees with nu_mod within 25 percent before T.
// A non-null shape switches from the tail band to shape inversion, which only
// the exact pressureless kind can justify.
rate_series rate_pipeline(const trajectory& traj, const profile_table& tbl,
                          double beta, double nu0, bool pressure_on, double T,
                          const profile* shape = nullptr) {
  rate_series rs;
  double seed = nu0;
  for (const auto& f : traj.snapshots) {
    double lam, nu;
    if (shape) {
      if (!(f.values[0] > 0))
        throw runtime_failure("rate_pipeline: a(t,0) must be positive");
      lam = 1.0 / f.values[0];
      nu = invert_shape_nu(f, *shape, lam);
    } else {
      const tail_band_fit tb = extract_tail_band(f, tbl, seed);
      lam = tb.lambda;
      nu = tb.nu;
    }
    if (finite(nu)) seed = nu;
    rs.t.push_back(f.time);
    rs.lambda.push_back(lam);
    rs.nu.push_back(nu);
  }
  const std::size_t n = rs.t.size();
  std::vector<double> fint(n);
  for (std::size_t i = 0; i < n; ++i) {
    double R = 0;
    if (pressure_on) {
      const auto& f = traj.snapshots[i];
      std::vector<double> q(f.values.size());
      for (std::size_t j = 0; j < q.size(); ++j) q[j] = f.values[j] * f.values[j];
      R = 2 * rs.lambda[i] * rs.lambda[i] * trapezoid(f.mesh.nodes, q);
    }
    fint[i] = (beta + (beta + 1) * R) / rs.lambda[i];
  }
  rs.nu_mod.resize(n);
  double lm = std::log(finite(rs.nu[0]) ? rs.nu[0] : nu0);
  rs.nu_mod[0] = std::exp(lm);
  for (std::size_t i = 1; i < n; ++i) {
    lm -= 0.5 * (fint[i] + fint[i - 1]) * (rs.t[i] - rs.t[i - 1]);
    rs.nu_mod[i] = std::exp(lm);
  }
  rs.valid.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool ok = finite(rs.nu[i]) && (T - rs.t[i] > 0) &&
                    std::abs(rs.nu[i] / rs.nu_mod[i] - 1.0) <= 0.25;
    rs.valid[i] = ok ? 1 : 0;
    if (ok) ++rs.n_valid;
  }
  return rs;
}

void push_verdict(std::vector<verdict>& vs, std::string claim, bool pass,
                  double measured, double target, double tol) {
  vs.push_back({std::move(claim), pass, measured, target, tol});
}

}  // namespace

smooth_checks smooth_window_checks(const scenario_bundle& b) {
  smooth_checks c;
  const double T = b.fits.T;
  if (!finite(T) || b.states.empty()) return c;
  std::vector<double> tt, q, lr;
  double wmin = HUGE_VAL;
  for (const auto& st : b.states) {
    const double gap = T - st.t;
    if (gap > 0) wmin = std::min(wmin, gap);
  }
  for (const auto& st : b.states) {
    const double gap = T - st.t;
    if (!(gap > 0) || gap >= 10 * wmin) continue;
    tt.push_back(st.t);
    q.push_back(st.nu * std::abs(std::log(gap)));
    lr.push_back(st.lambda / gap);
  }
  c.n_window = q.size();
  if (q.empty()) return c;
  c.q_lo = *std::min_element(q.begin(), q.end());
  c.q_hi = *std::max_element(q.begin(), q.end());
  c.q_min_increment = HUGE_VAL;
  for (std::size_t i = 1; i < q.size(); ++i)
    c.q_min_increment = std::min(c.q_min_increment, q[i] - q[i - 1]);
  if (q.size() == 1) c.q_min_increment = 0;
  c.q_toward_one = std::abs(q.back() - 1) <= std::abs(q.front() - 1) + 1e-12;
  c.lr_lo = *std::min_element(lr.begin(), lr.end());
  c.lr_hi = *std::max_element(lr.begin(), lr.end());
  double nlo = HUGE_VAL, nhi = -HUGE_VAL;
  for (const auto& st : b.states) {
    nlo = std::min(nlo, st.nu * st.s);
    nhi = std::max(nhi, st.nu * st.s);
  }
  c.nus_lo = nlo;
  c.nus_hi = nhi;
  return c;
}

scenario_bundle run_scenario(const scenario_spec& spec_in) {
  scenario_bundle b;
  b.spec = spec_in;
  apply_defaults(b.spec);
  validate(b.spec);
  const scenario_spec& sp = b.spec;

  profile_spec ps;
  ps.beta = sp.beta;
  const profile prof(ps);
  const profile_table tbl(sp.beta);

  b.init = build_initial(sp, prof);
  solver_config cfg = sp.solver;
  cfg.sup_stop = sp.sup_stop_mult * b.init.sup0;
  snapshot_policy pol{std::pow(2.0, 0.125), sp.horizon / 32};
  b.traj = run(b.init.f0, cfg, sp.horizon, pol);

  b.fits.T = b.fits.r2 = b.fits.T_half = knan;
  b.fits.beta_hat = b.fits.nu_inf = b.fits.log_law_tail = knan;
  b.fits.decay_slope_E1 = b.fits.decay_slope_E2 = knan;

  std::vector<double> ts, sups;
  for (const auto& r : b.traj.norms) {
    ts.push_back(r.t);
    sups.push_back(r.sup);
  }

  const bool steady = sp.kind == scenario_kind::steady_state;
  if (!steady && ts.size() >= 3) {
    try {
      const blowup_fit bf = fit_blowup_time(ts, sups, sp.fit_window_frac);
      b.fits.T = bf.T;
      b.fits.r2 = bf.r2;
    } catch (const runtime_failure&) {
    }
    try {
      b.fits.T_half = fit_blowup_time(ts, sups, sp.fit_window_frac / 2).T;
    } catch (const runtime_failure&) {
    }
  }

  const bool smooth_path =
      !steady && sp.beta == 0;  // smooth kind or beta = 0 custom
  const bool power_path = !steady && sp.beta > 0;

  const energy_config ecfg = energy_config::for_beta(
      sp.beta, sp.energy_eta > 0 ? sp.energy_eta : -1, sp.energy_zstar,
      sp.energy_bigK);

  std::vector<epsilon_field> eps_rows;  // aligned with b.states, maybe empty z
  if (smooth_path) {
    for (const auto& f : b.traj.snapshots)
      b.states.push_back(extract_modulation(f, 0.0));
    assign_selfsimilar_time(b.states, s0_smooth(b.states[0].lambda));
    for (std::size_t i = 0; i < b.states.size(); ++i)
      eps_rows.push_back(to_selfsimilar(b.traj.snapshots[i], b.states[i], tbl));
    for (std::size_t i = 0; i < b.states.size(); ++i) {
      b.E1.push_back(energy_E1(eps_rows[i], ecfg, sp.beta).value);
      b.E2.push_back(energy_E2(eps_rows[i], ecfg, b.states[i]));
    }
    if (b.states.size() >= 3) {
      const auto mr = modulation_residual(b.states, eps_rows, tbl, sp.beta);
      b.res1 = mr.res1;
      b.res2 = mr.res2;
      b.rhs = mr.rhs;
    }
    if (finite(b.fits.T)) {
      std::vector<double> st, sn;
      for (const auto& m : b.states) {
        st.push_back(m.t);
        sn.push_back(m.nu);
      }
      try {
        b.fits.log_law_tail =
            fit_nu_law(st, sn, b.fits.T, nu_law::log_law).exponent_or_limit;
      } catch (const runtime_failure&) {
      }
    }
    // remainder decay over s > s0 with positive energies
    std::vector<double> s1, e1, s2, e2;
    for (std::size_t i = 1; i < b.states.size(); ++i) {
      if (b.E1[i] > 0 && finite(b.E1[i])) {
        s1.push_back(b.states[i].s);
        e1.push_back(b.E1[i]);
      }
      if (b.E2[i] > 0 && finite(b.E2[i])) {
        s2.push_back(b.states[i].s);
        e2.push_back(b.E2[i]);
      }
    }
    try {
      if (s1.size() >= 2)
        b.fits.decay_slope_E1 = fit_remainder_decay(s1, e1, decay_law::exp_law);
    } catch (const runtime_failure&) {
    }
    try {
      if (s2.size() >= 2)
        b.fits.decay_slope_E2 =
            fit_remainder_decay(s2, e2, decay_law::power_law);
    } catch (const runtime_failure&) {
    }
  } else if (power_path) {
    b.rates = rate_pipeline(
        b.traj, tbl, sp.beta, sp.nu0, cfg.pressure_on, b.fits.T,
        sp.kind == scenario_kind::pressureless_exact ? &prof : nullptr);
    for (std::size_t i = 0; i < b.rates.t.size(); ++i) {
      modulation_state m;
      m.lambda = b.rates.lambda[i];
      m.nu = b.rates.nu[i];
      m.t = b.rates.t[i];
      b.states.push_back(m);
    }
    assign_selfsimilar_time(b.states, s0_power(b.states[0].lambda));
    const std::size_t n = b.states.size();
    b.E1.assign(n, knan);
    b.E2.assign(n, knan);
    b.res1.assign(n, knan);
    b.res2.assign(n, knan);
    b.rhs.assign(n, knan);
    std::vector<std::size_t> idx;
    std::vector<modulation_state> sub;
    std::vector<epsilon_field> sub_eps;
    for (std::size_t i = 0; i < n; ++i) {
      if (!finite(b.states[i].nu)) continue;
      auto e = to_selfsimilar(b.traj.snapshots[i], b.states[i], tbl);
      // early snapshots may not reach the energy window yet; leave those NaN
      try {
        b.E1[i] = energy_E1(e, ecfg, sp.beta).value;
      } catch (const runtime_failure&) {
      }
      try {
        b.E2[i] = energy_E2(e, ecfg, b.states[i]);
      } catch (const runtime_failure&) {
      }
      idx.push_back(i);
      sub.push_back(b.states[i]);
      sub_eps.push_back(std::move(e));
    }
    if (sub.size() >= 3) {
      const auto mr = modulation_residual(sub, sub_eps, tbl, sp.beta);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        b.res1[idx[k]] = mr.res1[k];
        b.res2[idx[k]] = mr.res2[k];
        b.rhs[idx[k]] = mr.rhs[k];
      }
    }
    if (finite(b.fits.T) && b.rates.n_valid >= 2) {
      std::vector<double> vt, vn;
      for (std::size_t i = 0; i < n; ++i) {
        if (!b.rates.valid[i]) continue;
        vt.push_back(b.rates.t[i]);
        vn.push_back(b.rates.nu[i]);
      }
      try {
        const auto pf = fit_nu_law(vt, vn, b.fits.T, nu_law::power);
        b.fits.beta_hat = pf.exponent_or_limit;
        b.fits.nu_inf = pf.nu_inf;
      } catch (const runtime_failure&) {
      }
    }
  }

  // verdicts
  auto& vs = b.verdicts;
  if (cfg.mean == mean_mode::projected) {
    double worst = 0;
    for (const auto& r : b.traj.norms)
      if (r.sup > 0) worst = std::max(worst, std::abs(r.mean) / r.sup);
    push_verdict(vs, "projected mean at machine zero", worst <= 1e-12, worst, 0,
                 1e-12);
  }
  if (steady) {
    const auto& a0 = b.traj.snapshots.front().values;
    const auto& af = b.traj.snapshots.back().values;
    double drift = 0;
    for (std::size_t j = 0; j < a0.size(); ++j)
      drift = std::max(drift, std::abs(af[j] - a0[j]));
    const bool reached = b.traj.reason == stop_reason::horizon;
    push_verdict(vs, "steady state drift", reached && drift < 1e-3, drift, 0,
                 1e-3);
    return b;
  }

  const double t_end = b.traj.norms.empty() ? 0 : b.traj.norms.back().t;
  const bool fit_ok = finite(b.fits.T) && b.fits.T > t_end && b.fits.r2 >= 0.99;
  push_verdict(vs, "finite-time blow-up fit", fit_ok, b.fits.r2, 1, 0.01);

  if (smooth_path) {
    const smooth_checks c = smooth_window_checks(b);
    const bool have = c.n_window >= 3;
    const double qdev = std::max(std::abs(c.q_lo - 1), std::abs(c.q_hi - 1));
    push_verdict(vs, "nu log-law window", have && qdev <= 0.5, qdev, 0, 0.5);
    push_verdict(vs, "nu log-law monotone approach",
                 have && c.q_min_increment > -1e-9 && c.q_toward_one,
                 c.q_min_increment, 0, 1e-9);
    const double ldev = std::max(std::abs(c.lr_lo - 1), std::abs(c.lr_hi - 1));
    push_verdict(vs, "lambda linear-rate window", have && ldev <= 0.2, ldev, 0,
                 0.2);
    const double ndev =
        std::max(std::abs(c.nus_lo - 1), std::abs(c.nus_hi - 1));
    push_verdict(vs, "nu times s order one", have && ndev <= 0.5, ndev, 0, 0.5);
    if (cfg.pressure_on && b.res1.size() >= 3) {
      double m1 = 0, m2 = 0;
      for (std::size_t i = 1; i + 1 < b.res1.size(); ++i) {
        if (finite(b.res1[i])) m1 = std::max(m1, b.res1[i]);
        if (finite(b.res2[i])) m2 = std::max(m2, b.res2[i]);
      }
      push_verdict(vs, "lambda modulation identity", m1 < 0.2, m1, 0, 0.2);
      push_verdict(vs, "nu modulation identity", m2 < 0.2, m2, 0, 0.2);
    }
    if (sp.kappa > 0) {
      double worst_rise = -HUGE_VAL;
      std::size_t cnt = 0;
      for (std::size_t i = 1; i < b.E2.size(); ++i) {
        if (!finite(b.E2[i]) || !finite(b.E2[i - 1])) continue;
        worst_rise = std::max(worst_rise, b.E2[i] - b.E2[i - 1]);
        ++cnt;
      }
      push_verdict(vs, "outer remainder nonincreasing",
                   cnt > 0 && worst_rise < 1e-9, worst_rise, 0, 1e-9);
      push_verdict(vs, "outer remainder decay slope",
                   finite(b.fits.decay_slope_E2) && b.fits.decay_slope_E2 <= -0.3,
                   b.fits.decay_slope_E2, -0.3, 0);
    }
  } else if (power_path) {
    const double hshift = std::abs(b.fits.T - b.fits.T_half) /
                          (finite(b.fits.T) ? b.fits.T : 1.0);
    push_verdict(vs, "blow-up time stable under window halving",
                 finite(hshift) && hshift <= 0.02, hshift, 0, 0.02);
    const double btol =
        sp.kind == scenario_kind::pressureless_exact || !cfg.pressure_on ? 0.05
                                                                         : 0.10;
    const double bdev = std::abs(b.fits.beta_hat - sp.beta) / sp.beta;
    push_verdict(vs, "power-law exponent matches beta",
                 finite(bdev) && bdev <= btol, bdev, 0, btol);
    push_verdict(vs, "inner scale limit finite",
                 finite(b.fits.nu_inf) && b.fits.nu_inf > 0, b.fits.nu_inf, 0,
                 0);
    if (sp.kind == scenario_kind::pressureless_exact) {
      const auto& f = b.traj.snapshots.back();
      const double gap = sp.exact_T - f.time;
      double num = 0, den = 0;
      if (gap > 0) {
        for (std::size_t j = 0; j < f.values.size(); ++j) {
          const double ex =
              prof.phi(f.mesh.nodes[j] / std::pow(gap, sp.beta)) / gap;
          num = std::max(num, std::abs(f.values[j] - ex));
          den = std::max(den, std::abs(ex));
        }
      }
      const double rel = den > 0 ? num / den : knan;
      push_verdict(vs, "exact profile tracking error", finite(rel) && rel < 1e-2,
                   rel, 0, 1e-2);
      const double tdev = std::abs(b.fits.T - sp.exact_T) / sp.exact_T;
      push_verdict(vs, "blow-up time matches exact",
                   finite(tdev) && tdev <= 0.02, tdev, 0, 0.02);
    }
  }
  return b;
}

lift2d lift_to_2d(const field& f, std::span<const double> x_nodes) {
  if (x_nodes.size() < 3)
    throw runtime_failure("lift_to_2d: need at least 3 X nodes");
  lift2d L;
  L.x.assign(x_nodes.begin(), x_nodes.end());
  L.z = f.mesh.nodes;
  const std::size_t nx = L.x.size(), nz = L.z.size();
  L.u.resize(nx * nz);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nz; ++j) L.u[i * nz + j] = -L.x[i] * f.values[j];
  L.w.resize(nz);
  cumulative_trapezoid(f.mesh.nodes, f.values, L.w);
  std::vector<double> q(nz);
  for (std::size_t j = 0; j < nz; ++j) q[j] = f.values[j] * f.values[j];
  L.pressure_integral = trapezoid(f.mesh.nodes, q);
  L.p.resize(nx);
  for (std::size_t i = 0; i < nx; ++i)
    L.p[i] = -L.x[i] * L.x[i] * L.pressure_integral;
  return L;
}

double momentum_residual(const lift2d& L, const field& f,
                         std::span<const double> a_rate) {
  const std::size_t nx = L.x.size(), nz = L.z.size();
  if (a_rate.size() != nz || f.values.size() != nz)
    throw runtime_failure("momentum_residual: size mismatch");
  const std::vector<double> px = derivative_nonuniform(L.x, L.p);
  // u_Z column by column; u is linear in X so u_X is taken per row
  std::vector<double> ucol(nx), urow(nz), uz_all(nx * nz), ux_all(nx * nz);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nz; ++j) urow[j] = L.u[i * nz + j];
    const auto uz = derivative_nonuniform(L.z, urow);
    for (std::size_t j = 0; j < nz; ++j) uz_all[i * nz + j] = uz[j];
  }
  for (std::size_t j = 0; j < nz; ++j) {
    for (std::size_t i = 0; i < nx; ++i) ucol[i] = L.u[i * nz + j];
    const auto ux = derivative_nonuniform(L.x, ucol);
    for (std::size_t i = 0; i < nx; ++i) ux_all[i * nz + j] = ux[i];
  }
  double worst = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      const double ut = -L.x[i] * a_rate[j];
      const double r = ut + L.u[i * nz + j] * ux_all[i * nz + j] +
                       L.w[j] * uz_all[i * nz + j] + px[i];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double divergence_residual(const lift2d& L) {
  const std::size_t nz = L.z.size();
  // u_X is X-independent; difference the first two X columns
  double worst = 0;
  for (std::size_t j = 0; j + 1 < nz; ++j) {
    const double ux_lo =
        (L.u[1 * nz + j] - L.u[0 * nz + j]) / (L.x[1] - L.x[0]);
    const double ux_hi =
        (L.u[1 * nz + j + 1] - L.u[0 * nz + j + 1]) / (L.x[1] - L.x[0]);
    const double wz = (L.w[j + 1] - L.w[j]) / (L.z[j + 1] - L.z[j]);
    worst = std::max(worst, std::abs(0.5 * (ux_lo + ux_hi) + wz));
  }
  return worst;
}

}  // namespace hydroblow
