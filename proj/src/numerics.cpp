#include "hydroblow/numerics.hpp"

#include <algorithm>
#include <cassert>

#include "hydroblow/errors.hpp"

namespace hydroblow {

namespace {
// 16-point Gauss-Legendre abscissas/weights on [-1,1], positive half.
constexpr double gl_x[8] = {
    0.0950125098376374402, 0.2816035507792589132, 0.4580167776572273863,
    0.6178762444026437484, 0.7554044083550030339, 0.8656312023878317439,
    0.9445750230732325761, 0.9894009349916499326};
constexpr double gl_w[8] = {
    0.1894506104550684963, 0.1826034150449235889, 0.1691565193950025382,
    0.1495959888165767320, 0.1246289712555338720, 0.0951585116824927848,
    0.0622535239386478929, 0.0271524594117540949};
}  // namespace

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0;
  for (size_t j = 1; j < x.size(); ++j)
    s += 0.5 * (y[j] + y[j - 1]) * (x[j] - x[j - 1]);
  return s;
}

void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) {
  out[0] = 0;
  for (size_t j = 1; j < x.size(); ++j)
    out[j] = out[j - 1] + 0.5 * (y[j] + y[j - 1]) * (x[j] - x[j - 1]);
}

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  double total = 0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    const double half = 0.5 * h;
    double s = 0;
    for (int i = 0; i < 8; ++i)
      s += gl_w[i] * (f(mid - half * gl_x[i]) + f(mid + half * gl_x[i]));
    total += s * half;
  }
  return total;
}

double invert_monotone(const std::function<double(double)>& f,
                       const std::function<double(double)>& fp, double target,
                       double lo, double hi, double tol, int max_iter) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo > 0 || fhi < 0)
    throw runtime_failure("invert_monotone: bracket does not contain target");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x) - target;
    if (std::abs(fx) <= tol) return x;
    if (fx > 0)
      hi = x;
    else
      lo = x;
    const double d = fp(x);
    double xn = d > 0 ? x - fx / d : lo - 1;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) return x;
    x = xn;
  }
  return x;
}

linfit linear_regression(std::span<const double> xs, std::span<const double> ys) {
  const size_t n = xs.size();
  assert(n >= 2 && ys.size() == n);
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  linfit r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (r.slope * xs[i] + r.intercept);
    ss_res += e * e;
  }
  r.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  r.rms_residual = std::sqrt(ss_res / double(n));
  return r;
}

double one_sided_derivative4(std::span<const double> x, std::span<const double> y) {
  // Fit the cubic through (x0..x3); return its derivative at x0 via the
  // Lagrange form. Exact for polynomials of degree <= 3.
  assert(x.size() >= 4);
  double d = 0;
  for (int i = 0; i < 4; ++i) {
    double num = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      double prod = 1;
      for (int k = 0; k < 4; ++k) {
        if (k == i || k == j) continue;
        prod *= x[0] - x[k];
      }
      num += prod;
    }
    double den = 1;
    for (int k = 0; k < 4; ++k) {
      if (k == i) continue;
      den *= x[i] - x[k];
    }
    d += y[i] * num / den;
  }
  return d;
}

double lininterp(std::span<const double> x, std::span<const double> y, double xq) {
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const size_t j = size_t(it - x.begin());
  const double w = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + w * (y[j] - y[j - 1]);
}

std::vector<double> derivative_nonuniform(std::span<const double> x,
                                          std::span<const double> y) {
  const size_t n = x.size();
  if (n < 3 || y.size() != n)
    throw runtime_failure("derivative_nonuniform needs at least 3 aligned samples");
  std::vector<double> d(n);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = (h1 * h1 * y[i + 1] + (h2 * h2 - h1 * h1) * y[i] - h2 * h2 * y[i - 1]) /
           (h1 * h2 * (h1 + h2));
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               (2 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

}  // namespace hydroblow
