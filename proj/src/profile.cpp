#include "hydroblow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"

namespace hydroblow {

namespace {

constexpr double series_cut = 0.99;  // series below, quadrature segment above

// (beta+1) int_0^xi u^beta/(1+u) du as an alternating series, xi <= series_cut.
double z_series(double beta, double xi, double tol) {
  const double lx = std::log(xi);
  double s = 0;
  for (int k = 0; k < 2000000; ++k) {
    const double p = beta + 1 + k;
    const double term = std::exp(p * lx) / p;
    s += (k % 2 == 0) ? term : -term;
    if (term < tol && k > 4) break;
  }
  return (beta + 1) * s;
}

// (beta+1) int_0^xi u^beta/(1+u)^2 du, same region.
double psi_series(double beta, double xi, double tol) {
  const double lx = std::log(xi);
  double s = 0;
  double prev = HUGE_VAL;
  for (int k = 0; k < 2000000; ++k) {
    const double p = beta + 1 + k;
    const double term = (k + 1) * std::exp(p * lx) / p;
    s += (k % 2 == 0) ? term : -term;
    // terms grow before they decay for beta > 1; only trust the alternating
    // truncation bound on the decreasing stretch
    if (term < tol && term < prev && k > 4) break;
    prev = term;
  }
  return (beta + 1) * s;
}

// int_0^xi u^beta/(1+u)^3 du with xi <= 0.5 (series radius limits the cut).
double pressure_head_series(double beta, double xi, double tol) {
  const double lx = std::log(xi);
  double s = 0;
  double prev = HUGE_VAL;
  for (int k = 0; k < 2000000; ++k) {
    const double p = beta + 1 + k;
    const double term = 0.5 * (k + 1) * (k + 2) * std::exp(p * lx) / p;
    s += (k % 2 == 0) ? term : -term;
    if (term < tol && term < prev && k > 4) break;
    prev = term;
  }
  return s;
}

// Smooth integrand quadrature on [lo, hi], 1 <= lo, via u = e^v.
double z_integral_log(double beta, double lo, double hi, int per_decade = 12) {
  const double vlo = std::log(lo), vhi = std::log(hi);
  const int panels = std::max(1, int((vhi - vlo) * per_decade / 2.3) + 1);
  return gauss_legendre(
      [beta](double v) {
        const double u = std::exp(v);
        return std::exp((beta + 1) * v) / (1 + u);
      },
      vlo, vhi, panels);
}

double psi_integral_log(double beta, double lo, double hi, int per_decade = 12) {
  const double vlo = std::log(lo), vhi = std::log(hi);
  const int panels = std::max(1, int((vhi - vlo) * per_decade / 2.3) + 1);
  return gauss_legendre(
      [beta](double v) {
        const double u = std::exp(v);
        return std::exp((beta + 1) * v) / ((1 + u) * (1 + u));
      },
      vlo, vhi, panels);
}

}  // namespace

profile::profile(profile_spec spec) : spec_(spec) {
  if (spec_.beta < 0) throw runtime_failure("profile: beta must be >= 0");
  if (spec_.quad_tol <= 0 || spec_.invert_tol <= 0 || spec_.xi_max <= 0)
    throw runtime_failure("profile: tolerances must be positive");
  if (spec_.beta > 0) {
    z_max_ = z_of_xi(spec_.xi_max);
    psi_max_ = psi_of_xi(spec_.xi_max);
    d_beta_ = std::pow((spec_.beta + 1) / spec_.beta, 1 / spec_.beta);
  }
}

double profile::z_of_xi(double xi) const {
  const double b = spec_.beta;
  if (b == 0) throw runtime_failure("z_of_xi: closed form handles beta = 0");
  if (xi <= 0) return 0;
  if (xi <= series_cut) return z_series(b, xi, spec_.quad_tol);
  const double base = z_series(b, series_cut, spec_.quad_tol);
  if (xi <= 1)
    return base + (b + 1) * gauss_legendre(
                                [b](double u) { return std::pow(u, b) / (1 + u); },
                                series_cut, xi, 2);
  const double to_one =
      (b + 1) * gauss_legendre(
                    [b](double u) { return std::pow(u, b) / (1 + u); },
                    series_cut, 1.0, 2);
  return base + to_one + (b + 1) * z_integral_log(b, 1.0, xi);
}

double profile::psi_of_xi(double xi) const {
  const double b = spec_.beta;
  if (b == 0) throw runtime_failure("psi_of_xi: closed form handles beta = 0");
  if (xi <= 0) return 0;
  if (xi <= series_cut) return psi_series(b, xi, spec_.quad_tol);
  const double base = psi_series(b, series_cut, spec_.quad_tol);
  auto f = [b](double u) {
    return std::pow(u, b) / ((1 + u) * (1 + u));
  };
  if (xi <= 1) return base + (b + 1) * gauss_legendre(f, series_cut, xi, 2);
  const double to_one = (b + 1) * gauss_legendre(f, series_cut, 1.0, 2);
  return base + to_one + (b + 1) * psi_integral_log(b, 1.0, xi);
}

double profile::xi_of_z(double z) const {
  const double b = spec_.beta;
  if (b == 0) throw runtime_failure("xi_of_z: closed form handles beta = 0");
  if (z < 0) throw runtime_failure("xi_of_z: z must be >= 0");
  if (z == 0) return 0;
  if (z > z_max_)
    throw runtime_failure("xi_of_z: z = " + std::to_string(z) +
                          " beyond the xi_max = " + std::to_string(spec_.xi_max) +
                          " truncation");
  // leading-order guesses bracket the monotone map
  double hi = std::max(std::pow(z, 1.0 / (b + 1)), std::pow(b * z / (b + 1), 1.0 / b));
  hi = std::min(std::max(hi * 2, 1e-12), spec_.xi_max);
  while (z_of_xi(hi) < z) hi = std::min(hi * 4, spec_.xi_max);
  return invert_monotone([this](double x) { return z_of_xi(x); },
                         [b](double x) {
                           return (b + 1) * std::pow(x, b) / (1 + x);
                         },
                         z, 0.0, hi, spec_.invert_tol);
}

double profile::phi(double z) const {
  if (spec_.beta == 0) return std::exp(-z);
  if (z <= 0) return 1.0;
  if (z >= z_max_) return d_beta_ * std::pow(z, -1 / spec_.beta);
  return 1.0 / (1.0 + xi_of_z(z));
}

double profile::phi_prime(double z) const {
  const double b = spec_.beta;
  if (b == 0) return -std::exp(-z);
  if (z <= 0)
    throw runtime_failure("phi_prime: one-sided blowup at z = 0 for beta > 0");
  if (z >= z_max_)
    return -d_beta_ / b * std::pow(z, -1 / b - 1);
  const double xi = xi_of_z(z);
  return -1.0 / ((b + 1) * std::pow(xi, b) * (1 + xi));
}

double profile::antideriv(double z) const {
  const double b = spec_.beta;
  if (b == 0) return 1.0 - std::exp(-z);
  if (z <= 0) return 0;
  if (z >= z_max_) {
    if (b == 1) return psi_max_ + d_beta_ * std::log(z / z_max_);
    const double q = 1 - 1 / b;
    return psi_max_ + d_beta_ * (std::pow(z, q) - std::pow(z_max_, q)) / q;
  }
  return psi_of_xi(xi_of_z(z));
}

double profile::residual(double z) const {
  const double b = spec_.beta;
  if (b == 0) {
    const double p = std::exp(-z);
    return (0 * z + (1 - p)) * (-p) - p * p + p;
  }
  const double f = phi(z);
  const double fp = phi_prime(z);
  const double ps = antideriv(z);
  return (b * z + ps) * fp - f * f + f;
}

profile_point profile::at_xi(double xi) const {
  const double b = spec_.beta;
  profile_point p;
  p.xi = xi;
  p.z = z_of_xi(xi);
  p.phi = 1 / (1 + xi);
  p.phi_prime = xi > 0 ? -1 / ((b + 1) * std::pow(xi, b) * (1 + xi)) : 0;
  p.psi = psi_of_xi(xi);
  return p;
}

double cbeta_parametric(double beta, double quad_tol) {
  if (beta <= 0)
    throw runtime_failure("cbeta_parametric: requires beta > 0 (beta = 0 uses the closed form)");
  const double head = z_series(beta, series_cut, quad_tol) / (beta + 1);
  const double rest = gauss_legendre(
      [beta](double u) { return std::pow(u, beta) / (1 + u); }, series_cut, 1.0, 2);
  return 1.0 / (head + rest);
}

double pressure_constant(double beta, const profile_spec& spec_in) {
  if (beta < 0) throw runtime_failure("pressure_constant: beta must be >= 0");
  if (beta >= 2)
    throw runtime_failure("pressure_constant: 2 int phi^2 diverges for beta >= 2");
  profile_spec spec = spec_in;
  spec.beta = beta;
  // 2 int_0^inf phi^2 dz = 2(beta+1) int_0^inf xi^beta (1+xi)^-3 dxi,
  // split as series head + smooth quadrature + analytic tail.
  const double head = pressure_head_series(beta, 0.5, spec.quad_tol);
  const double vlo = std::log(0.5), vhi = std::log(spec.xi_max);
  const int panels = std::max(2, int((vhi - vlo) * 6) + 1);
  const double mid = gauss_legendre(
      [beta](double v) {
        const double u = std::exp(v);
        const double q = 1 + u;
        return std::exp((beta + 1) * v) / (q * q * q);
      },
      vlo, vhi, panels);
  const double xm = spec.xi_max;
  const double tail = std::pow(xm, beta - 2) / (2 - beta) -
                      3 * std::pow(xm, beta - 3) / (3 - beta);
  return 2 * (beta + 1) * (head + mid + tail);
}

double tail_constant(double beta, const profile_spec& spec_in) {
  if (beta <= 0) throw runtime_failure("tail_constant: requires beta > 0");
  profile_spec spec = spec_in;
  spec.beta = beta;
  profile p(spec);
  std::vector<double> est;
  for (double xi = 100; xi <= spec.xi_max * 1.0000001; xi *= 10) {
    const double z = p.z_of_xi(std::min(xi, spec.xi_max));
    est.push_back(std::pow(z, 1 / beta) / (1 + std::min(xi, spec.xi_max)));
  }
  for (size_t k = 2; k < est.size(); ++k) {
    const double lo = std::min({est[k - 2], est[k - 1], est[k]});
    const double hi = std::max({est[k - 2], est[k - 1], est[k]});
    if ((hi - lo) / est[k] < 1e-3) {
      if (k == est.size() - 1) return est[k];
      continue;
    }
    if (k == est.size() - 1)
      throw runtime_failure("tail_constant: no convergence within xi_max");
  }
  return est.back();
}

profile_table::profile_table(double beta, const profile_spec& spec_in)
    : beta_(beta) {
  profile_spec spec = spec_in;
  spec.beta = beta;
  if (beta == 0) {
    d_beta_ = 0;
    z_top_ = HUGE_VAL;
    return;
  }
  profile p(spec);
  d_beta_ = p.tail_coefficient();
  const int n = 6000;
  const double lxi_lo = std::log(1e-8), lxi_hi = std::log(1e6);
  zs_.reserve(n + 1);
  phis_.reserve(n + 1);
  zs_.push_back(0);
  phis_.push_back(1);
  for (int i = 0; i <= n; ++i) {
    const double xi = std::exp(lxi_lo + (lxi_hi - lxi_lo) * i / n);
    zs_.push_back(p.z_of_xi(xi));
    phis_.push_back(1 / (1 + xi));
  }
  z_top_ = zs_.back();
}

double profile_table::operator()(double z) const {
  if (beta_ == 0) return std::exp(-z);
  if (z <= 0) return 1;
  if (z >= z_top_) return d_beta_ * std::pow(z, -1 / beta_);
  return lininterp(zs_, phis_, z);
}

}  // namespace hydroblow
