#include "hydroblow/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

energy_config energy_config::for_beta(double beta, double eta, double zstar,
                                      double bigK) {
  if (beta < 0) throw config_error("energy_config: beta >= 0 required");
  energy_config cfg;
  cfg.zstar = zstar;
  cfg.bigK = bigK;
  if (zstar < 1) throw config_error("energy_config: zstar >= 1 required");
  if (bigK < 1) throw config_error("energy_config: K >= 1 required");
  if (beta == 0) {
    cfg.eta = 0;
    cfg.alpha = -2;
    cfg.delta = 2.0 / 3.0;
    return cfg;
  }
  cfg.eta = eta > 0 ? eta : std::min(beta, 1.0) / 2;
  if (!(cfg.eta > 0 && cfg.eta < std::min(beta, 1.0)))
    throw config_error("energy_config: 0 < eta < min(beta,1) required");
  cfg.alpha = (std::abs(1 - beta) - 2 + cfg.eta / 2) / (beta + 1);
  cfg.delta = 2 * std::min(beta, 1.0) - cfg.eta;
  if (!(cfg.alpha > -1 && cfg.alpha < 1))
    throw config_error("energy_config: alpha outside (-1,1)");
  if (!(cfg.delta > 0)) throw config_error("energy_config: delta <= 0");
  return cfg;
}

modulation_state extract_modulation(const field& f, double beta,
                                    const profile_table* tbl,
                                    double fit_window, double nu_seed) {
  modulation_state m;
  m.t = f.time;
  const double a0 = f.values[0];
  if (!(a0 > 0))
    throw runtime_failure("extract_modulation: a(t,0) must be positive");
  m.lambda = 1.0 / a0;

  if (beta == 0) {
    const double da0 = one_sided_derivative4(f.mesh.nodes, f.values);
    if (!(da0 < 0))
      throw runtime_failure("extract_modulation: dZ a(t,0) must be negative");
    m.nu = -1.0 / (m.lambda * da0);
    return m;
  }

  if (tbl == nullptr || tbl->beta() != beta)
    throw runtime_failure("extract_modulation: beta > 0 needs a matching table");
  const auto& z = f.mesh.nodes;
  const double win = fit_window > 0
                         ? fit_window
                         : z[std::min<std::size_t>(16, z.size() - 1)];
  std::vector<double> zw, dw;
  for (std::size_t j = 1; j < z.size() && z[j] <= win; ++j) {
    zw.push_back(z[j]);
    dw.push_back(m.lambda * f.values[j]);
  }
  if (zw.size() < 3)
    throw runtime_failure("extract_modulation: fit window has < 3 nodes");

  double lm = std::log(nu_seed > 0 ? nu_seed : win);
  const double h = 1e-6;
  for (int it = 0; it < 200; ++it) {
    double jr = 0, jj = 0;
    for (std::size_t i = 0; i < zw.size(); ++i) {
      const double r = (*tbl)(zw[i] * std::exp(-lm)) - dw[i];
      const double d = ((*tbl)(zw[i] * std::exp(-(lm + h))) -
                        (*tbl)(zw[i] * std::exp(-(lm - h)))) /
                       (2 * h);
      jr += d * r;
      jj += d * d;
    }
    if (jj == 0) throw runtime_failure("extract_modulation: degenerate fit");
    const double dm = std::clamp(-jr / jj, -1.0, 1.0);
    lm += dm;
    if (std::abs(dm) < 1e-13) break;
  }
  m.nu = std::exp(lm);
  if (!(m.nu > 0) || !std::isfinite(m.nu))
    throw runtime_failure("extract_modulation: degenerate fit");
  return m;
}

epsilon_field to_selfsimilar(const field& f, const modulation_state& m,
                             const profile_table& tbl) {
  epsilon_field e;
  const std::size_t n = f.values.size();
  e.z.resize(n);
  e.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    e.z[j] = f.mesh.nodes[j] / m.nu;
    e.values[j] = m.lambda * f.values[j] - tbl(e.z[j]);
  }
  return e;
}

namespace {

double weight(double z, const energy_config& cfg, double beta) {
  if (beta == 0) return 1.0 / (z * z);
  return std::pow(z, cfg.alpha) * std::exp(-cfg.bigK * z);
}

}  // namespace

e1_result energy_E1(const epsilon_field& e, const energy_config& cfg,
                    double beta) {
  if (e.z.back() < cfg.zstar)
    throw runtime_failure("energy_E1: grid does not reach zstar");
  e1_result out;
  // integrand w(z) eps_z^2 at nodes, eps_z one-sided over each cell
  std::vector<double> zi, yi;
  for (std::size_t j = 1; j < e.z.size() && e.z[j - 1] < cfg.zstar; ++j) {
    const double d =
        (e.values[j] - e.values[j - 1]) / (e.z[j] - e.z[j - 1]);
    zi.push_back(std::min(e.z[j], cfg.zstar));
    yi.push_back(weight(zi.back(), cfg, beta) * d * d);
  }
  double integral = 0;
  for (std::size_t k = 1; k < zi.size(); ++k)
    integral += 0.5 * (yi[k] + yi[k - 1]) * (zi[k] - zi[k - 1]);
  out.value = std::sqrt(std::max(0.0, integral));
  // omitted first cell: integrand ~ A z^p with the gauge decay of eps_z
  const double p =
      beta == 0 ? 0.0 : cfg.alpha + 2 * (2.0 / (beta + 1) - 1.0);
  if (!zi.empty() && p > -1)
    out.first_cell_bound = std::sqrt(yi.front() * zi.front() / (p + 1));
  else
    out.first_cell_bound = HUGE_VAL;
  return out;
}

double energy_E2(const epsilon_field& e, const energy_config& cfg,
                 const modulation_state& m) {
  if (e.z.back() < cfg.zstar)
    throw runtime_failure("energy_E2: grid does not reach zstar");
  const double zhi = 1.0 / m.nu;
  double s = 0;
  bool seen = false;
  for (std::size_t j = 0; j < e.z.size(); ++j) {
    if (e.z[j] < cfg.zstar || e.z[j] > zhi * (1 + 1e-12)) continue;
    s = std::max(s, std::abs(e.values[j]));
    seen = true;
  }
  if (!seen) throw runtime_failure("energy_E2: empty window [zstar, 1/nu]");
  return s;
}

void assign_selfsimilar_time(std::vector<modulation_state>& states, double s0) {
  if (states.empty()) return;
  for (const auto& st : states)
    if (!(st.lambda > 0))
      throw runtime_failure("assign_selfsimilar_time: nonpositive lambda");
  states[0].s = s0;
  for (std::size_t i = 1; i < states.size(); ++i)
    states[i].s = states[i - 1].s +
                  (states[i].t - states[i - 1].t) * 0.5 *
                      (1 / states[i].lambda + 1 / states[i - 1].lambda);
}

double s0_smooth(double lambda0) {
  if (!(lambda0 > 0 && lambda0 < 1))
    throw config_error("s0_smooth: lambda0 in (0,1) required");
  double s = 15.0;
  for (int k = 0; k < 200; ++k) s = std::log(s / lambda0);
  return s;
}

double s0_power(double lambda0) {
  if (!(lambda0 > 0))
    throw config_error("s0_power: lambda0 > 0 required");
  return std::log(1.0 / lambda0);
}

modulation_residuals modulation_residual(
    const std::vector<modulation_state>& states,
    const std::vector<epsilon_field>& eps, const profile_table& tbl,
    double beta) {
  const std::size_t n = states.size();
  if (n < 3 || eps.size() != n)
    throw runtime_failure("modulation_residual: needs >= 3 aligned states");
  modulation_residuals out;
  out.res1.resize(n);
  out.res2.resize(n);
  out.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = eps[i];
    std::vector<double> q(e.z.size());
    for (std::size_t j = 0; j < e.z.size(); ++j) {
      const double v = tbl(e.z[j]) + e.values[j];
      q[j] = v * v;
    }
    out.rhs[i] = 2 * states[i].nu * trapezoid(e.z, q);
  }
  auto dlog = [&](auto get, std::size_t i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == n - 1 ? n - 1 : i + 1;
    return (std::log(get(states[hi])) - std::log(get(states[lo]))) /
           (states[hi].s - states[lo].s);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double dl = dlog([](const modulation_state& s) { return s.lambda; }, i);
    const double dn = dlog([](const modulation_state& s) { return s.nu; }, i);
    const double r = out.rhs[i];
    const double scale = r != 0 ? std::abs(r) : 1.0;
    out.res1[i] = std::abs((dl + 1.0) - r) / scale;
    out.res2[i] = std::abs((-dn - beta) / (beta + 1) - r) / scale;
  }
  return out;
}

}  // namespace hydroblow
