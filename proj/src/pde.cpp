#include "hydroblow/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

grid grid::graded(std::size_t n, double g) {
  if (n < 16) throw config_error("grid: N >= 16 required");
  if (g < 1) throw config_error("grid: grading exponent g >= 1 required");
  grid out;
  out.nodes.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    out.nodes[j] = std::pow(double(j) / double(n), g);
  out.nodes[0] = 0;
  out.nodes[n] = 1;
  return out;
}

double field::sup() const {
  double s = 0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double field::mean() const { return trapezoid(mesh.nodes, values); }

field cumulative_integral(const field& f) {
  field out;
  out.mesh = f.mesh;
  out.time = f.time;
  out.values.resize(f.values.size());
  cumulative_trapezoid(f.mesh.nodes, f.values, out.values);
  return out;
}

namespace {

void upwind_dz(const std::vector<double>& z, const std::vector<double>& a,
               const std::vector<double>& c, std::vector<double>& d) {
  const std::size_t n = z.size() - 1;
  d.resize(a.size());
  for (std::size_t j = 0; j <= n; ++j) {
    if (c[j] > 0 && j >= 1) {
      d[j] = (a[j] - a[j - 1]) / (z[j] - z[j - 1]);
    } else if (c[j] < 0 && j <= n - 1) {
      d[j] = (a[j + 1] - a[j]) / (z[j + 1] - z[j]);
    } else {
      d[j] = 0;
    }
  }
}

void rhs_into(const std::vector<double>& z, const std::vector<double>& a,
              const solver_config& cfg, std::vector<double>& c,
              std::vector<double>& dz, std::vector<double>& out) {
  c.resize(a.size());
  cumulative_trapezoid(z, a, c);
  upwind_dz(z, a, c, dz);
  out.resize(a.size());
  double pressure = 0;
  if (cfg.pressure_on) {
    double s = 0;
    for (std::size_t j = 1; j < a.size(); ++j)
      s += 0.5 * (a[j] * a[j] + a[j - 1] * a[j - 1]) * (z[j] - z[j - 1]);
    pressure = 2 * s;
  }
  for (std::size_t j = 0; j < a.size(); ++j)
    out[j] = a[j] * a[j] - c[j] * dz[j] - pressure;
}

}  // namespace

std::vector<double> rhs(const field& f, const solver_config& cfg) {
  std::vector<double> c, dz, out;
  rhs_into(f.mesh.nodes, f.values, cfg, c, dz, out);
  return out;
}

double adaptive_dt(const field& f, const solver_config& cfg) {
  const auto& z = f.mesh.nodes;
  std::vector<double> c(f.values.size());
  cumulative_trapezoid(z, f.values, c);
  double t1 = HUGE_VAL;
  for (std::size_t j = 1; j < z.size(); ++j) {
    const double cc = std::max(std::abs(c[j - 1]), std::abs(c[j]));
    t1 = std::min(t1, (z[j] - z[j - 1]) / (cc + 1e-300));
  }
  const double t2 = 1.0 / (f.sup() + 1.0);
  return cfg.cfl * std::min(t1, t2);
}

bool step(field& f, double dt, const solver_config& cfg) {
  const auto& z = f.mesh.nodes;
  const std::size_t n = f.values.size();
  std::vector<double> c, dz, k1, k2, k3, k4, tmp(n), next(n);
  rhs_into(z, f.values, cfg, c, dz, k1);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = f.values[j] + 0.5 * dt * k1[j];
  rhs_into(z, tmp, cfg, c, dz, k2);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = f.values[j] + 0.5 * dt * k2[j];
  rhs_into(z, tmp, cfg, c, dz, k3);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = f.values[j] + dt * k3[j];
  rhs_into(z, tmp, cfg, c, dz, k4);
  for (std::size_t j = 0; j < n; ++j)
    next[j] = f.values[j] +
              dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  if (cfg.mean == mean_mode::projected) {
    const double m = trapezoid(z, next);
    for (double& v : next) v -= m;
  }
  for (double v : next)
    if (!std::isfinite(v)) return false;
  f.values = std::move(next);
  f.time += dt;
  return true;
}

trajectory run(const field& f0, const solver_config& cfg, double horizon,
               const snapshot_policy& snaps) {
  if (!(cfg.cfl > 0 && cfg.cfl < 1))
    throw config_error("run: cfl must lie in (0,1)");
  if (!(cfg.sup_stop > f0.sup()))
    throw config_error("run: sup_stop must exceed the initial sup norm");
  for (double v : f0.values)
    if (!std::isfinite(v)) throw runtime_failure("run: non-finite initial data");

  trajectory traj;
  field f = f0;
  traj.snapshots.push_back(f);
  double last_snap_sup = f.sup();
  double last_snap_t = f.time;
  traj.reason = stop_reason::max_steps;
  for (long k = 0; k < cfg.max_steps; ++k) {
    if (f.time >= horizon) {
      traj.reason = stop_reason::horizon;
      break;
    }
    if (f.sup() >= cfg.sup_stop) {
      traj.reason = stop_reason::sup_stop;
      break;
    }
    const double dt = std::min(adaptive_dt(f, cfg), horizon - f.time);
    if (!step(f, dt, cfg)) {
      traj.reason = stop_reason::overflow;
      break;
    }
    const double s = f.sup();
    traj.norms.push_back({f.time, s,
                          one_sided_derivative4(f.mesh.nodes, f.values),
                          f.mean(), dt});
    const bool ratio_due =
        snaps.sup_ratio > 0 && s >= last_snap_sup * snaps.sup_ratio;
    const bool gap_due = snaps.t_gap > 0 && f.time >= last_snap_t + snaps.t_gap;
    if (ratio_due || gap_due) {
      traj.snapshots.push_back(f);
      last_snap_sup = s;
      last_snap_t = f.time;
    }
  }
  if (f.time > traj.snapshots.back().time) traj.snapshots.push_back(f);
  return traj;
}

mean_report mean_evolution_check(const trajectory& traj) {
  if (traj.snapshots.size() < 3)
    throw runtime_failure("mean_evolution_check: needs >= 3 snapshots");
  mean_report rep;
  for (const auto& r : traj.norms) {
    rep.max_abs_mean = std::max(rep.max_abs_mean, std::abs(r.mean));
    if (r.sup > 0)
      rep.max_mean_over_sup =
          std::max(rep.max_mean_over_sup, std::abs(r.mean) / r.sup);
  }
  // m' = -m a(.,1) integrated over the snapshot times with trapezoid in the
  // log: d log m / dt = -a(.,1) while m keeps its sign
  const auto& ss = traj.snapshots;
  double m = ss.front().mean();
  double max_err = std::abs(m - ss.front().mean());
  for (std::size_t i = 1; i < ss.size(); ++i) {
    const double dt = ss[i].time - ss[i - 1].time;
    const double g0 = ss[i - 1].values.back();
    const double g1 = ss[i].values.back();
    m *= std::exp(-0.5 * (g0 + g1) * dt);
    max_err = std::max(max_err, std::abs(m - ss[i].mean()));
  }
  rep.ode_max_error = max_err;
  return rep;
}

}  // namespace hydroblow
