#pragma once
#include <span>
#include <vector>

namespace hydroblow {

struct blowup_fit {
  double T = 0;       // extrapolated blow-up time
  double slope = 0;   // of 1/sup vs t on the window
  double r2 = 0;
  double window_lo = 0, window_hi = 0;
};

enum class nu_law { power, log_law };

struct scale_law_fit {
  nu_law mode = nu_law::power;
  double exponent_or_limit = 0;  // beta_hat (power) or tail mean (log)
  double nu_inf = 0;             // power mode only
  double residual = 0;           // rms on the fitted relation
  std::vector<double> log_law_sequence;  // nu |log(T-t)|, log mode
};

// Linear regression of 1/sup vs t on the last ceil(window_frac * n) samples;
// T = -intercept/slope. Rejects non-monotone tails and T <= window end.
blowup_fit fit_blowup_time(std::span<const double> ts,
                           std::span<const double> sups, double window_frac);

// power: regression of log nu vs log(T-t) over all samples given;
// log: the sequence nu |log(T-t)| and its tail mean (last quarter).
scale_law_fit fit_nu_law(std::span<const double> ts,
                         std::span<const double> nus, double T, nu_law mode);

enum class decay_law { exp_law, power_law };

// Slope of log energy vs s (exp) or vs log s (power).
double fit_remainder_decay(std::span<const double> ss,
                           std::span<const double> energies, decay_law law);

}  // namespace hydroblow
