#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hydroblow/errors.hpp"
#include "hydroblow/pde.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/scenario.hpp"

using namespace hydroblow;

namespace {

constexpr double tau = 6.283185307179586476925286766559;

const verdict* find(const scenario_bundle& b, const std::string& claim) {
  for (const auto& v : b.verdicts)
    if (v.claim == claim) return &v;
  return nullptr;
}

bool mentions(const config_error& e, const char* needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("smooth defaults fill the theorem window") {
  scenario_spec sp;
  sp.kind = scenario_kind::smooth;
  apply_defaults(sp);
  CHECK(sp.lambda0 == doctest::Approx(1e-4));
  CHECK(sp.nu0 == doctest::Approx(1.0 / std::log(1e4)).epsilon(1e-12));
  CHECK(sp.grid_g == doctest::Approx(1.0));
  CHECK(sp.horizon == doctest::Approx(1.0));
  CHECK_NOTHROW(validate(sp));
}

TEST_CASE("nonsmooth defaults derive the inner scale from lambda0") {
  scenario_spec sp;
  sp.kind = scenario_kind::nonsmooth;
  sp.beta = 1;
  apply_defaults(sp);
  CHECK(sp.lambda0 == doctest::Approx(1e-3));
  CHECK(sp.nu0 == doctest::Approx(0.5e-3).epsilon(1e-12));
  CHECK(sp.grid_g == doctest::Approx(2.0));
  CHECK_NOTHROW(validate(sp));
}

TEST_CASE("validation names the violated constraint") {
  scenario_spec sp;
  sp.kind = scenario_kind::smooth;
  apply_defaults(sp);

  scenario_spec bad = sp;
  bad.beta = -1;
  CHECK_THROWS_WITH_AS(validate(bad), "beta >= 0 required", config_error);

  bad = sp;
  bad.lambda0 = 2;
  try {
    validate(bad);
    CHECK(false);
  } catch (const config_error& e) {
    CHECK(mentions(e, "lambda0"));
  }

  bad = sp;
  bad.nu0 = 1.0;  // outside [2/(3 log(1/lambda0)), 3/(2 log(1/lambda0))]
  try {
    validate(bad);
    CHECK(false);
  } catch (const config_error& e) {
    CHECK(mentions(e, "nu0"));
  }

  bad = sp;
  bad.grid_n = 8;
  try {
    validate(bad);
    CHECK(false);
  } catch (const config_error& e) {
    CHECK(mentions(e, "grid.n"));
  }

  bad = sp;
  bad.oracle_sup_mult = 1;
  CHECK_THROWS_WITH_AS(validate(bad), "oracle.sup_mult > 1 required",
                       config_error);

  scenario_spec nb;
  nb.kind = scenario_kind::nonsmooth;
  nb.beta = 1;
  apply_defaults(nb);
  nb.energy_eta = 1.0;  // the weight exponent needs eta < min(beta, 2 - beta)
  CHECK_THROWS_AS(validate(nb), config_error);

  scenario_spec ns;
  ns.kind = scenario_kind::nonsmooth;
  CHECK_THROWS_AS(apply_defaults(ns), config_error);  // needs beta > 0
}

TEST_CASE("pressureless kind derives its scales from the blow-up time") {
  scenario_spec sp;
  sp.kind = scenario_kind::pressureless_exact;
  sp.beta = 1;
  sp.exact_T = 2;
  apply_defaults(sp);
  CHECK(sp.lambda0 == doctest::Approx(2.0));
  CHECK(sp.nu0 == doctest::Approx(2.0));
  CHECK(sp.horizon == doctest::Approx(1.0));
  CHECK_FALSE(sp.solver.pressure_on);
  CHECK(sp.solver.mean == mean_mode::literal);

  scenario_spec contra;
  contra.kind = scenario_kind::pressureless_exact;
  contra.beta = 1;
  contra.lambda0 = 5;  // contradicts lambda0 = exact.T
  CHECK_THROWS_AS(apply_defaults(contra), config_error);
}

TEST_CASE("initial data is projected to zero mean with reported correction") {
  scenario_spec sp;
  sp.kind = scenario_kind::smooth;
  sp.grid_n = 256;
  apply_defaults(sp);
  validate(sp);
  profile_spec ps;
  const profile prof(ps);
  const initial_data init = build_initial(sp, prof);
  CHECK(std::abs(init.f0.mean()) <= 1e-12 * init.sup0);
  CHECK(init.mean_correction > 900);
  CHECK(init.mean_correction < 1300);
  CHECK(init.sup0 == doctest::Approx(init.f0.sup()));
  CHECK(init.sup0 > 8000);
  CHECK(init.perturbation_norm == 0.0);
}

TEST_CASE("steady initial data is the plain cosine") {
  scenario_spec sp;
  sp.kind = scenario_kind::steady_state;
  sp.steady_k = 2;
  sp.grid_n = 64;
  apply_defaults(sp);
  validate(sp);
  profile_spec ps;
  const profile prof(ps);
  const initial_data init = build_initial(sp, prof);
  for (std::size_t j = 0; j < init.f0.values.size(); ++j)
    CHECK(init.f0.values[j] ==
          doctest::Approx(std::cos(tau * 2 * init.f0.mesh.nodes[j]))
              .epsilon(1e-12));
}

TEST_CASE("perturbation is normalized before scaling by kappa") {
  scenario_spec sp;
  sp.kind = scenario_kind::smooth;
  sp.grid_n = 256;
  sp.kappa = 0.1;
  sp.perturbation_m = 1;
  apply_defaults(sp);
  validate(sp);
  profile_spec ps;
  const profile prof(ps);
  const initial_data with = build_initial(sp, prof);
  CHECK(with.perturbation_norm > 0.0);
  sp.kappa = 0;
  const initial_data base = build_initial(sp, prof);
  double diff = 0;
  for (std::size_t j = 0; j < with.f0.values.size(); ++j)
    diff = std::max(diff, std::abs(with.f0.values[j] - base.f0.values[j]));
  // the proxy norm is dominated by the second difference of the bump, about
  // 60 here, so kappa = 0.1 moves the field by roughly 1e-3
  CHECK(diff > 1e-4);
  CHECK(diff < 1e-2);
}

TEST_CASE("steady scenario bundle reports drift honestly") {
  scenario_spec sp;
  sp.kind = scenario_kind::steady_state;
  sp.steady_k = 1;
  sp.grid_n = 128;
  sp.horizon = 0.2;
  apply_defaults(sp);
  validate(sp);
  const scenario_bundle b = run_scenario(sp);
  CHECK(b.traj.reason == stop_reason::horizon);
  CHECK(b.states.empty());
  CHECK(std::isnan(b.fits.T));
  const verdict* v = find(b, "steady state drift");
  REQUIRE(v != nullptr);
  CHECK(v->measured >= 0.0);
  CHECK(v->tolerance == doctest::Approx(1e-3));
}

TEST_CASE("pressureless scenario recovers the exact rate law") {
  scenario_spec sp;
  sp.kind = scenario_kind::pressureless_exact;
  sp.beta = 1;
  sp.grid_n = 256;
  apply_defaults(sp);
  validate(sp);
  const scenario_bundle b = run_scenario(sp);

  const verdict* track = find(b, "exact profile tracking error");
  REQUIRE(track != nullptr);
  CHECK(track->pass);
  CHECK(track->measured < 1e-2);

  const verdict* tt = find(b, "blow-up time matches exact");
  REQUIRE(tt != nullptr);
  CHECK(tt->pass);

  const verdict* pw = find(b, "power-law exponent matches beta");
  REQUIRE(pw != nullptr);
  CHECK(pw->pass);
  CHECK(std::abs(b.fits.beta_hat - 1.0) < 0.05);

  REQUIRE(b.rates.t.size() == b.traj.snapshots.size());
  CHECK(b.rates.n_valid >= 2);
  for (std::size_t i = 1; i < b.states.size(); ++i)
    CHECK(b.states[i].s >= b.states[i - 1].s);
}

TEST_CASE("two-dimensional lift has the exact product structure") {
  grid mesh = grid::graded(256, 1.0);
  std::vector<double> vals(mesh.nodes.size());
  for (std::size_t j = 0; j < vals.size(); ++j)
    vals[j] = std::cos(tau * mesh.nodes[j]);
  const field f{std::move(mesh), std::move(vals), 0};
  std::vector<double> x(33);
  for (int i = 0; i < 33; ++i) x[i] = -1.0 + 2.0 * i / 32;
  const lift2d L = lift_to_2d(f, x);

  CHECK(L.pressure_integral == doctest::Approx(0.5).epsilon(1e-4));
  const std::size_t nz = L.z.size();
  for (std::size_t ix = 0; ix < L.x.size(); ix += 8)
    for (std::size_t jz = 0; jz < nz; jz += 32)
      CHECK(L.u[ix * nz + jz] ==
            doctest::Approx(-L.x[ix] * std::cos(tau * L.z[jz])).epsilon(1e-12));
  for (std::size_t jz = 0; jz < nz; jz += 16)
    CHECK(L.w[jz] ==
          doctest::Approx(std::sin(tau * L.z[jz]) / tau).epsilon(2e-4));
  for (std::size_t ix = 0; ix < L.x.size(); ix += 8)
    CHECK(L.p[ix] ==
          doctest::Approx(-L.x[ix] * L.x[ix] * L.pressure_integral)
              .epsilon(1e-12));

  CHECK(divergence_residual(L) <= 1e-12);

  solver_config cfg;
  const std::vector<double> rate = rhs(f, cfg);
  CHECK(momentum_residual(L, f, rate) < 0.05);

  // zero field lifts to the zero flow
  field zf = f;
  for (auto& v : zf.values) v = 0;
  const lift2d Lz = lift_to_2d(zf, x);
  const std::vector<double> zero_rate(zf.values.size(), 0.0);
  CHECK(momentum_residual(Lz, zf, zero_rate) == 0.0);
  CHECK(divergence_residual(Lz) == 0.0);
}
