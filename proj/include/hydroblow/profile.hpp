#pragma once
#include <vector>

namespace hydroblow {

struct profile_spec {
  double beta = 0;
  double quad_tol = 1e-12;
  double invert_tol = 1e-12;
  double xi_max = 1e8;
};

struct profile_point {
  double z, xi, phi, phi_prime, psi;
};

// Blow-up profile family phi_beta via the parametric solution of
//   (beta z + psi) phi' - phi^2 + phi = 0,  psi = int_0^z phi,
// normalized so z(xi) = (beta+1) int_0^xi u^beta/(1+u) du and
// phi = 1/(1+xi). beta = 0 dispatches to the closed form e^{-z}.
class profile {
 public:
  explicit profile(profile_spec spec);

  double z_of_xi(double xi) const;
  double psi_of_xi(double xi) const;
  double xi_of_z(double z) const;  // throws past the xi_max truncation
  double phi(double z) const;      // switches to the d_beta tail beyond z_max
  double phi_prime(double z) const;
  double antideriv(double z) const;
  double residual(double z) const;
  profile_point at_xi(double xi) const;

  double z_max() const { return z_max_; }
  double tail_coefficient() const { return d_beta_; }
  const profile_spec& spec() const { return spec_; }

 private:
  profile_spec spec_;
  double z_max_ = 0;    // z(xi_max)
  double psi_max_ = 0;  // psi(xi_max)
  double d_beta_ = 0;   // ((beta+1)/beta)^(1/beta), tail coefficient
};

// C_beta of the parametric construction: 1 / int_0^1 u^beta/(1+u) du.
double cbeta_parametric(double beta, double quad_tol = 1e-12);

// 2 int_0^infty phi_beta^2 dz, finite iff beta < 2.
double pressure_constant(double beta, const profile_spec& spec = {});

// d_beta from the limit of phi(z) z^(1/beta) over a geometric xi sequence.
double tail_constant(double beta, const profile_spec& spec = {});

// Sampled profile on a fixed z table with the analytic tail beyond; used by
// pipelines that evaluate phi millions of times.
class profile_table {
 public:
  profile_table(double beta, const profile_spec& spec = {});
  double operator()(double z) const;
  double beta() const { return beta_; }

 private:
  double beta_, d_beta_, z_top_;
  std::vector<double> zs_, phis_;
};

}  // namespace hydroblow
