#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hydroblow/errors.hpp"
#include "hydroblow/numerics.hpp"
#include "hydroblow/scaling.hpp"

using namespace hydroblow;

namespace {

void exact_hyperbola(std::vector<double>& ts, std::vector<double>& sups) {
  ts.resize(100);
  sups.resize(100);
  for (int i = 0; i < 100; ++i) {
    ts[i] = 0.9 * i / 99;
    sups[i] = 1.0 / (1.0 - ts[i]);
  }
}

}  // namespace

TEST_CASE("blow-up time from an exact hyperbola") {
  std::vector<double> ts, sups;
  exact_hyperbola(ts, sups);
  const blowup_fit f = fit_blowup_time(ts, sups, 0.25);
  CHECK(f.T == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(f.r2 >= 1.0 - 1e-12);
  CHECK(f.window_hi == doctest::Approx(0.9));

  // affine reparametrization of time maps T the same way
  std::vector<double> ts2 = ts;
  for (double& t : ts2) t = 2 * t + 0.1;
  const blowup_fit f2 = fit_blowup_time(ts2, sups, 0.25);
  CHECK(f2.T == doctest::Approx(2.1).epsilon(1e-9));

  // window shrink is a no-op on exact data
  const blowup_fit fh = fit_blowup_time(ts, sups, 0.125);
  CHECK(fh.T == doctest::Approx(f.T).epsilon(1e-9));
}

TEST_CASE("blow-up fit rejects unusable windows") {
  std::vector<double> ts = {0, 0.1, 0.2, 0.3};
  std::vector<double> flat = {2, 2, 2, 2};
  CHECK_THROWS_AS((void)fit_blowup_time(ts, flat, 0.5), runtime_failure);
  std::vector<double> nonmono = {1, 2, 1.5, 3};
  CHECK_THROWS_AS((void)fit_blowup_time(ts, nonmono, 1.0), runtime_failure);
  std::vector<double> neg = {1, 2, -3, 4};
  CHECK_THROWS_AS((void)fit_blowup_time(ts, neg, 1.0), runtime_failure);
}

TEST_CASE("one percent amplitude noise moves T by under two percent") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  // geometric approach keeps consecutive ratios above the noise band, so the
  // monotone-tail precondition survives every draw
  std::vector<double> ts(200), sups(200);
  for (int i = 0; i < 200; ++i) ts[i] = 1.0 - 0.3 * std::pow(0.97, i);
  for (int draw = 0; draw < 100; ++draw) {
    for (int i = 0; i < 200; ++i)
      sups[i] = (1.0 + noise(rng)) / (1.0 - ts[i]);
    const blowup_fit f = fit_blowup_time(ts, sups, 0.25);
    CHECK(std::abs(f.T - 1.0) <= 0.02);
  }
}

TEST_CASE("power-law scale fit is exact on synthetic data") {
  std::vector<double> ts(100), nus(100);
  for (int i = 0; i < 100; ++i) {
    ts[i] = 0.9 * i / 99;
    nus[i] = 0.5 * std::pow(1.0 - ts[i], 0.7);
  }
  const scale_law_fit f = fit_nu_law(ts, nus, 1.0, nu_law::power);
  CHECK(f.exponent_or_limit == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(f.nu_inf == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(f.residual <= 1e-12);

  std::vector<double> past = {0.5, 1.5};
  std::vector<double> nu2 = {0.1, 0.05};
  CHECK_THROWS_AS((void)fit_nu_law(past, nu2, 1.0, nu_law::power),
                  runtime_failure);
}

TEST_CASE("log-law sequence has unit tail on synthetic data") {
  std::vector<double> ts(50), nus(50);
  for (int i = 0; i < 50; ++i) {
    ts[i] = 0.5 + 0.4 * i / 49;
    nus[i] = 1.0 / std::abs(std::log(1.0 - ts[i]));
  }
  const scale_law_fit f = fit_nu_law(ts, nus, 1.0, nu_law::log_law);
  CHECK(f.exponent_or_limit == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.residual <= 1e-12);
  REQUIRE(f.log_law_sequence.size() == 50);
  for (double q : f.log_law_sequence) CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("remainder decay slopes are recovered exactly") {
  std::vector<double> ss(50), ee(50), pe(50);
  for (int i = 0; i < 50; ++i) {
    ss[i] = 1.0 + 9.0 * i / 49;
    ee[i] = std::exp(-0.8 * ss[i]);
    pe[i] = std::pow(ss[i], -2.0 / 3.0);
  }
  CHECK(fit_remainder_decay(ss, ee, decay_law::exp_law) ==
        doctest::Approx(-0.8).epsilon(1e-9));
  CHECK(fit_remainder_decay(ss, pe, decay_law::power_law) ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("linear regression reports goodness of fit") {
  std::vector<double> xs = {0, 1, 2, 3, 4};
  std::vector<double> ys = {1, 3, 5, 7, 9};
  const linfit f = linear_regression(xs, ys);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.rms_residual <= 1e-13);
}
