#include "hydroblow/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

namespace {

struct rate {
  std::vector<double> dz, da;
};

void ode(const std::vector<double>& z, const std::vector<double>& a,
         const solver_config& cfg, rate& r) {
  const std::size_t n = a.size();
  r.dz.resize(n);
  r.da.resize(n);
  cumulative_trapezoid(z, a, r.dz);
  double pressure = 0;
  if (cfg.pressure_on) {
    std::vector<double> a2(n), ca2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = a[i] * a[i];
    cumulative_trapezoid(z, a2, ca2);
    // the domain integral stops at Z=1 even when particles have exited
    pressure = 2 * (z.back() > 1.0 ? lininterp(z, ca2, 1.0) : ca2.back());
  }
  for (std::size_t i = 0; i < n; ++i) r.da[i] = a[i] * a[i] - pressure;
}

}  // namespace

particle_set integrate_characteristics(const field& f0, std::size_t n_particles,
                                       double t_end, const solver_config& cfg) {
  if (n_particles < 16)
    throw config_error("integrate_characteristics: n_particles >= 16 required");
  const std::size_t nn = f0.values.size();
  particle_set ps;
  ps.time = f0.time;
  if (n_particles == nn) {
    ps.positions = f0.mesh.nodes;
    ps.values = f0.values;
  } else {
    // reseed on a graded mesh with the grading inferred from f0
    const double z1 = f0.mesh.nodes[1];
    const double g = std::max(1.0, std::log(z1) / std::log(1.0 / double(nn - 1)));
    grid seed = grid::graded(n_particles - 1, g);
    ps.positions = seed.nodes;
    ps.values.resize(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i)
      ps.values[i] = lininterp(f0.mesh.nodes, f0.values, ps.positions[i]);
  }

  std::vector<double> c(ps.values.size());
  rate k1, k2, k3, k4;
  std::vector<double> tz(ps.values.size()), ta(ps.values.size());
  const std::size_t n = ps.values.size();
  for (long it = 0; it < cfg.max_steps && ps.time < t_end; ++it) {
    double sup = 0;
    for (double v : ps.values) sup = std::max(sup, std::abs(v));
    if (sup >= cfg.sup_stop) break;
    cumulative_trapezoid(ps.positions, ps.values, c);
    double t1 = HUGE_VAL;
    for (std::size_t i = 1; i < n; ++i) {
      const double cc = std::max(std::abs(c[i - 1]), std::abs(c[i]));
      t1 = std::min(t1, (ps.positions[i] - ps.positions[i - 1]) / (cc + 1e-300));
    }
    const double dt =
        std::min(cfg.cfl * std::min(t1, 1.0 / (sup + 1.0)), t_end - ps.time);
    if (ps.time + dt == ps.time) break;  // below the rounding floor of t

    ode(ps.positions, ps.values, cfg, k1);
    for (std::size_t i = 0; i < n; ++i) {
      tz[i] = ps.positions[i] + 0.5 * dt * k1.dz[i];
      ta[i] = ps.values[i] + 0.5 * dt * k1.da[i];
    }
    ode(tz, ta, cfg, k2);
    for (std::size_t i = 0; i < n; ++i) {
      tz[i] = ps.positions[i] + 0.5 * dt * k2.dz[i];
      ta[i] = ps.values[i] + 0.5 * dt * k2.da[i];
    }
    ode(tz, ta, cfg, k3);
    for (std::size_t i = 0; i < n; ++i) {
      tz[i] = ps.positions[i] + dt * k3.dz[i];
      ta[i] = ps.values[i] + dt * k3.da[i];
    }
    ode(tz, ta, cfg, k4);
    for (std::size_t i = 0; i < n; ++i) {
      ps.positions[i] +=
          dt / 6.0 * (k1.dz[i] + 2 * k2.dz[i] + 2 * k3.dz[i] + k4.dz[i]);
      ps.values[i] +=
          dt / 6.0 * (k1.da[i] + 2 * k2.da[i] + 2 * k3.da[i] + k4.da[i]);
      if (!std::isfinite(ps.positions[i]) || !std::isfinite(ps.values[i]))
        throw runtime_failure("integrate_characteristics: overflow at t = " +
                              std::to_string(ps.time));
    }
    ps.time += dt;
    ++ps.steps;
    for (std::size_t i = 1; i < n; ++i)
      if (!(ps.positions[i] > ps.positions[i - 1]))
        throw runtime_failure(
            "integrate_characteristics: particle crossing at t = " +
            std::to_string(ps.time) + " (under-resolution or shock)");
  }
  return ps;
}

double compare_to_eulerian(const particle_set& ps, const field& f) {
  if (std::abs(ps.time - f.time) > 1e-12 * std::max(1.0, std::abs(f.time)))
    throw runtime_failure("compare_to_eulerian: time mismatch");
  const double zhi = std::min(1.0, ps.positions.back());
  double disc = 0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    if (f.mesh.nodes[j] > zhi) break;
    const double rec = lininterp(ps.positions, ps.values, f.mesh.nodes[j]);
    disc = std::max(disc, std::abs(rec - f.values[j]));
  }
  return disc;
}

}  // namespace hydroblow
