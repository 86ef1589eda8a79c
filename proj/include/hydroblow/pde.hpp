#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hydroblow {

// Nodes Z_j = (j/N)^g on [0,1]; g >= 1 clusters resolution at the left
// boundary where the solution spikes.
struct grid {
  std::vector<double> nodes;

  static grid graded(std::size_t n, double g);
  std::size_t cells() const { return nodes.size() - 1; }
};

struct field {
  grid mesh;
  std::vector<double> values;
  double time = 0;

  double sup() const;
  double mean() const;  // trapezoid integral over [0,1]
};

enum class mean_mode : std::uint8_t { literal, projected };

struct solver_config {
  bool pressure_on = true;
  double cfl = 0.4;
  double sup_stop = 1e30;  // absolute threshold on sup|a|
  mean_mode mean = mean_mode::projected;
  long max_steps = 10000000;
};

enum class stop_reason : std::uint8_t { horizon, sup_stop, max_steps, overflow };

struct norm_record {
  double t, sup, dza0, mean, dt;
};

struct snapshot_policy {
  double sup_ratio = 0;  // snapshot when sup grows by this factor; 0 disables
  double t_gap = 0;      // snapshot when t advances by this much; 0 disables
};

struct trajectory {
  std::vector<field> snapshots;  // always includes the initial and final state
  std::vector<norm_record> norms;
  stop_reason reason = stop_reason::horizon;
};

// Nodal cumulative trapezoid of f, the transport speed int_0^Z a.
field cumulative_integral(const field& f);

// a^2 - (int_0^Z a) a_Z - 2 int_0^1 a^2 [pressure_on], with a_Z differenced
// one-sided against the nodewise sign of the transport speed.
std::vector<double> rhs(const field& f, const solver_config& cfg);

// cfl * min over cells of dZ/(|speed|+eps) and the reaction bound 1/(sup+1).
double adaptive_dt(const field& f, const solver_config& cfg);

// Classical RK4; projected mode removes the mean after the full update.
// Returns false when a non-finite value appears, leaving f untouched.
[[nodiscard]] bool step(field& f, double dt, const solver_config& cfg);

trajectory run(const field& f0, const solver_config& cfg, double horizon,
               const snapshot_policy& snaps = {});

struct mean_report {
  double max_abs_mean = 0;       // max |m(t)| over the recorded steps
  double max_mean_over_sup = 0;  // max |m(t)| / sup|a|(t)
  double ode_max_error = 0;      // vs m' = -m a(.,1) integrated on snapshots
};

mean_report mean_evolution_check(const trajectory& traj);

}  // namespace hydroblow
