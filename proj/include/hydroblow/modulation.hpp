#pragma once
#include <vector>

#include "hydroblow/pde.hpp"
#include "hydroblow/profile.hpp"

namespace hydroblow {

struct modulation_state {
  double lambda = 0;  // amplitude scale, a(t,0) = 1/lambda
  double nu = 0;      // spatial scale of the rescaled profile
  double s = 0;       // self-similar time, ds/dt = 1/lambda
  double t = 0;
};

struct epsilon_field {
  std::vector<double> z;       // increasing, [0, 1/nu]
  std::vector<double> values;  // eps(z) = lambda a(t, nu z) - phi(z)
};

// Weighted-energy parameters. beta > 0 uses the weight z^alpha e^{-K z} with
// alpha = (|1-beta| - 2 + eta/2)/(beta+1) and delta = 2 min(beta,1) - eta;
// beta = 0 uses the weight z^-2 (alpha, eta unused, delta = 2/3 target rate).
struct energy_config {
  double eta = 0;
  double alpha = 0;
  double delta = 0;
  double bigK = 8;
  double zstar = 4;

  static energy_config for_beta(double beta, double eta = -1,
                                double zstar = 4, double bigK = 8);
};

// Gauge extraction: lambda = 1/a(t,0) always. beta = 0 sets
// nu = -1/(lambda dZa(t,0)) from the 4-point one-sided derivative; beta > 0
// fits 1 - lambda a against 1 - phi(Z/nu) over Z in (0, fit_window] by
// Gauss-Newton in log nu (fit_window <= 0 means the first 16 grid cells,
// nu_seed <= 0 seeds from the window size). s is left 0 for later assignment.
modulation_state extract_modulation(const field& f, double beta,
                                    const profile_table* tbl = nullptr,
                                    double fit_window = 0, double nu_seed = 0);

epsilon_field to_selfsimilar(const field& f, const modulation_state& m,
                             const profile_table& tbl);

struct e1_result {
  double value = 0;            // sqrt of the weighted integral over [z_1, z*]
  double first_cell_bound = 0; // same units, analytic bound on the omitted cell
};

e1_result energy_E1(const epsilon_field& e, const energy_config& cfg,
                    double beta);

double energy_E2(const epsilon_field& e, const energy_config& cfg,
                 const modulation_state& m);

// s(t) by trapezoid of 1/lambda over the recorded states, starting at s0.
void assign_selfsimilar_time(std::vector<modulation_state>& states, double s0);

// s0 conventions: beta = 0 solves lambda0 = s0 e^{-s0}; beta > 0 uses
// s0 = log(1/lambda0).
double s0_smooth(double lambda0);
double s0_power(double lambda0);

struct modulation_residuals {
  std::vector<double> res1, res2, rhs;  // aligned with the input states
};

// Residuals of lambda_s/lambda + 1 = R and (-nu_s/nu - beta)/(beta+1) = R
// with R = 2 nu int (phi+eps)^2 dz, relative to R; centered differences in s
// at interior samples, one-sided at the ends.
modulation_residuals modulation_residual(
    const std::vector<modulation_state>& states,
    const std::vector<epsilon_field>& eps, const profile_table& tbl,
    double beta);

}  // namespace hydroblow
