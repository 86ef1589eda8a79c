#include "hydroblow/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

blowup_fit fit_blowup_time(std::span<const double> ts,
                           std::span<const double> sups, double window_frac) {
  if (ts.size() != sups.size() || ts.size() < 3)
    throw runtime_failure("fit_blowup_time: needs >= 3 aligned samples");
  if (!(window_frac > 0 && window_frac <= 1))
    throw runtime_failure("fit_blowup_time: window_frac in (0,1] required");
  const std::size_t n = ts.size();
  const std::size_t k =
      std::max<std::size_t>(2, std::size_t(std::ceil(window_frac * double(n))));
  const std::size_t i0 = n - k;
  std::vector<double> x(ts.begin() + i0, ts.end());
  std::vector<double> y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = sups[i0 + i];
    if (!(s > 0))
      throw runtime_failure("fit_blowup_time: sup norms must be positive");
    if (i > 0 && !(s > sups[i0 + i - 1]))
      throw runtime_failure(
          "fit_blowup_time: sup norm not increasing on the fit window");
    y[i] = 1.0 / s;
  }
  const linfit fit = linear_regression(x, y);
  if (!(fit.slope < 0))
    throw runtime_failure("fit_blowup_time: 1/sup not decreasing, no blowup");
  blowup_fit out;
  out.slope = fit.slope;
  out.r2 = fit.r2;
  out.T = -fit.intercept / fit.slope;
  out.window_lo = x.front();
  out.window_hi = x.back();
  if (!(out.T > out.window_hi))
    throw runtime_failure("fit_blowup_time: extrapolated T inside the window");
  return out;
}

scale_law_fit fit_nu_law(std::span<const double> ts,
                         std::span<const double> nus, double T, nu_law mode) {
  if (ts.size() != nus.size() || ts.size() < 2)
    throw runtime_failure("fit_nu_law: needs >= 2 aligned samples");
  for (double t : ts)
    if (!(t < T))
      throw runtime_failure("fit_nu_law: T must exceed every sample time");
  for (double v : nus)
    if (!(v > 0)) throw runtime_failure("fit_nu_law: nu samples must be positive");

  scale_law_fit out;
  out.mode = mode;
  const std::size_t n = ts.size();
  if (mode == nu_law::power) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::log(T - ts[i]);
      y[i] = std::log(nus[i]);
    }
    const linfit fit = linear_regression(x, y);
    out.exponent_or_limit = fit.slope;
    out.nu_inf = std::exp(fit.intercept);
    out.residual = fit.rms_residual;
    return out;
  }
  out.log_law_sequence.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.log_law_sequence[i] = nus[i] * std::abs(std::log(T - ts[i]));
  const std::size_t k = std::max<std::size_t>(1, n / 4);
  double mean = 0;
  for (std::size_t i = n - k; i < n; ++i) mean += out.log_law_sequence[i];
  mean /= double(k);
  out.exponent_or_limit = mean;
  double ss = 0;
  for (std::size_t i = n - k; i < n; ++i)
    ss += (out.log_law_sequence[i] - mean) * (out.log_law_sequence[i] - mean);
  out.residual = std::sqrt(ss / double(k));
  return out;
}

double fit_remainder_decay(std::span<const double> ss,
                           std::span<const double> energies, decay_law law) {
  if (ss.size() != energies.size() || ss.size() < 2)
    throw runtime_failure("fit_remainder_decay: needs >= 2 aligned samples");
  const std::size_t n = ss.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(energies[i] > 0))
      throw runtime_failure("fit_remainder_decay: energies must be positive");
    if (i > 0 && !(ss[i] > ss[i - 1]))
      throw runtime_failure("fit_remainder_decay: s must be increasing");
    x[i] = law == decay_law::exp_law ? ss[i] : std::log(ss[i]);
    y[i] = std::log(energies[i]);
  }
  return linear_regression(x, y).slope;
}

}  // namespace hydroblow
