#pragma once
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hydroblow {

// Trapezoid rule on an arbitrary node set.
double trapezoid(std::span<const double> x, std::span<const double> y);

// Cumulative trapezoid sums; out[0] = 0, same length as x.
void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out);

// Composite 16-point Gauss-Legendre over [a,b] with the given panel count.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels);

// Bracketed Newton on a monotone increasing function: returns x in [lo,hi]
// with |f(x) - target| <= tol, falling back to bisection when Newton leaves
// the bracket. fp is the derivative of f.
double invert_monotone(const std::function<double(double)>& f,
                       const std::function<double(double)>& fp, double target,
                       double lo, double hi, double tol, int max_iter = 200);

struct linfit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double rms_residual = 0;
};

linfit linear_regression(std::span<const double> xs, std::span<const double> ys);

// One-sided derivative at x[0] from the first four nodes (third order).
double one_sided_derivative4(std::span<const double> x, std::span<const double> y);

// Piecewise-linear interpolation; clamps outside [x.front(), x.back()].
double lininterp(std::span<const double> x, std::span<const double> y, double xq);

// Nodal derivative on a possibly nonuniform grid: weighted centered 3-point
// in the interior, second-order one-sided 3-point at both ends.
std::vector<double> derivative_nonuniform(std::span<const double> x,
                                          std::span<const double> y);

}  // namespace hydroblow
