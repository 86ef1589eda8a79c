#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hydroblow/modulation.hpp"
#include "hydroblow/pde.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/scaling.hpp"

namespace hydroblow {

enum class scenario_kind { smooth, nonsmooth, pressureless_exact, steady_state, custom };

const char* to_string(scenario_kind k);
scenario_kind scenario_kind_from_string(const std::string& s);

// Full description of one experiment. Fields left at their "derive" sentinel
// (0 where noted) are filled in by apply_defaults according to the kind.
struct scenario_spec {
  scenario_kind kind = scenario_kind::smooth;
  double beta = 0;
  double lambda0 = 0;        // 0: kind default
  double nu0 = 0;            // 0: derived from lambda0 (and nu0_tilde for beta > 0)
  double nu0_tilde = 0.5;    // inner-scale budget for beta > 0 kinds
  double nu0_tilde_star = 1.0;
  double kappa = 0;          // perturbation amplitude
  int perturbation_m = 1;    // oscillation count of the perturbation
  std::size_t grid_n = 512;
  double grid_g = 0;         // 0: kind default (beta + 1; 1 for steady states)
  solver_config solver;      // sup_stop is overwritten from sup_stop_mult at run time
  double sup_stop_mult = 1e4;
  double horizon = 0;        // 0: kind default
  int steady_k = 1;          // wavenumber for steady-state data
  double exact_T = 1.0;      // blow-up time of the exact pressureless solution
  std::size_t oracle_particles = 0;  // 0: seed at the grid nodes
  double oracle_sup_mult = 10;       // cross-check stops at this amplification
  double fit_window_frac = 0.25;
  double energy_eta = 0;     // 0: default min(beta,1)/2
  double energy_zstar = 4;
  double energy_bigK = 8;
  std::string out_dir = "out";
};

// Fill kind-dependent defaults in place, then check every constraint.
// Throws config_error naming the violated constraint.
void apply_defaults(scenario_spec& spec);
void validate(const scenario_spec& spec);

struct initial_data {
  field f0;
  double mean_correction = 0;   // constant subtracted by the projected mode
  double perturbation_norm = 0; // proxy norm of the unscaled bump
  double sup0 = 0;
};

// Assemble initial data on the graded mesh for the given kind. The bump
// kappa * sin^2(pi Z) cos(2 pi m Z) is normalized by a discrete proxy of its
// C^2 size before scaling by kappa.
initial_data build_initial(const scenario_spec& spec, const profile& prof);

// Single-snapshot scale extraction for beta > 0 data: fit log(lambda a - C)
// against the log-profile over the band 0.01 <= lambda a - C <= 0.12 after
// removing the far-field offset C. nu is NaN when the band has under 3 nodes.
struct tail_band_fit {
  double lambda = 0;
  double nu = 0;
  double offset = 0;
};
tail_band_fit extract_tail_band(const field& f, const profile_table& tbl, double nu_seed);

// Rate-law bookkeeping for one run: per-snapshot scales, the modulation-ODE
// cross-check nu_mod, and the validity mask used by the power-law fit.
struct rate_series {
  std::vector<double> t;
  std::vector<double> lambda;
  std::vector<double> nu;      // NaN where extraction failed
  std::vector<double> nu_mod;  // integrated from the modulation ODE
  std::vector<char> valid;
  std::size_t n_valid = 0;
};

struct fit_summary {
  double T = 0, r2 = 0;        // NaN when no blow-up fit was possible
  double T_half = 0;           // refit with the window halved
  double beta_hat = 0;         // power mode only, else NaN
  double nu_inf = 0;           // exp(intercept) of the power fit, else NaN
  double log_law_tail = 0;     // tail mean of nu |log(T - t)|, else NaN
  double decay_slope_E1 = 0;
  double decay_slope_E2 = 0;
};

struct verdict {
  std::string claim;
  bool pass = false;
  double measured = 0;
  double target = 0;
  double tolerance = 0;
};

struct scenario_bundle {
  scenario_spec spec;
  initial_data init;
  trajectory traj;
  // Per-snapshot modulation series; rows align with traj.snapshots for
  // blow-up kinds and are empty for steady states.
  std::vector<modulation_state> states;
  std::vector<double> E1, E2;            // NaN where undefined
  std::vector<double> res1, res2, rhs;   // NaN at ends and invalid rows
  rate_series rates;
  fit_summary fits;
  std::vector<verdict> verdicts;
};

scenario_bundle run_scenario(const scenario_spec& spec);

// Windowed checks over the last decade of T - t, shared by the verdict
// builder and the acceptance suite.
struct smooth_checks {
  double q_lo = 0, q_hi = 0;        // range of nu |log(T - t)|
  double q_min_increment = 0;       // most negative consecutive difference
  bool q_toward_one = false;        // final gap to 1 no larger than the first
  double lr_lo = 0, lr_hi = 0;      // range of lambda / (T - t)
  double nus_lo = 0, nus_hi = 0;    // range of nu * s
  std::size_t n_window = 0;
};
smooth_checks smooth_window_checks(const scenario_bundle& b);

// Lift of a one-dimensional state to the two-dimensional stripe
// [-1,1] x [0,1]: u = -X a(Z), w = int_0^Z a, p = -X^2/2 * 2 int_0^1 a^2.
struct lift2d {
  std::vector<double> x;   // X nodes
  std::vector<double> z;   // Z nodes
  std::vector<double> u;   // row-major, u[ix * nz + jz]
  std::vector<double> w;   // per Z node
  std::vector<double> p;   // per X node
  double pressure_integral = 0;  // int_0^1 a^2
};
lift2d lift_to_2d(const field& f, std::span<const double> x_nodes);

// Sup of |u_t + u u_X + w u_Z + p_X| over the stripe, with u_t = -X da/dt
// supplied as the semi-discrete rate and all other derivatives taken by the
// independent nonuniform 3-point checker.
double momentum_residual(const lift2d& L, const field& f, std::span<const double> a_rate);

// Max of |u_X + w_Z| at cell centers; zero for the lift by construction.
double divergence_residual(const lift2d& L);

}  // namespace hydroblow
