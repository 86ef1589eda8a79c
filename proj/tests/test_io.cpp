#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hydroblow/errors.hpp"
#include "hydroblow/io.hpp"
#include "hydroblow/scenario.hpp"

using namespace hydroblow;
namespace fs = std::filesystem;

namespace {

fs::path write_tmp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("hydroblow_io_" + name);
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  os << text;
  os.close();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string thrown_message(const fs::path& cfg) {
  try {
    load_config(cfg.string());
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

scenario_bundle tiny_steady_bundle() {
  scenario_spec sp;
  sp.kind = scenario_kind::steady_state;
  sp.grid_n = 32;
  sp.horizon = 0.01;
  apply_defaults(sp);
  validate(sp);
  return run_scenario(sp);
}

}  // namespace

TEST_CASE("format17 round-trips doubles and names non-finite values") {
  CHECK(format17(0.1) == "0.10000000000000001");
  CHECK(format17(5.0) == "5");
  CHECK(format17(-2.5) == "-2.5");
  CHECK(format17(std::nan("")) == "nan");
  CHECK(format17(HUGE_VAL) == "inf");
  CHECK(format17(-HUGE_VAL) == "-inf");
  for (double v : {1.0 / 3.0, 6.02e23, 1e-300, -0.0, 123456789.123456789}) {
    const std::string s = format17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("minimal config gets kind defaults") {
  const fs::path cfg = write_tmp("minimal.cfg",
                                 "# smallest possible file\n"
                                 "kind = smooth\n");
  const loaded_config lc = load_config(cfg.string());
  CHECK(lc.spec.kind == scenario_kind::smooth);
  CHECK(lc.spec.lambda0 == doctest::Approx(1e-4));
  CHECK(lc.spec.nu0 == doctest::Approx(1.0 / std::log(1e4)));
  CHECK(lc.spec.grid_g == doctest::Approx(1.0));
  CHECK(lc.spec.horizon == doctest::Approx(1.0));
  // the raw copy keeps the derive sentinels for sweep re-derivation
  CHECK(lc.raw.lambda0 == 0.0);
  CHECK(lc.raw.nu0 == 0.0);
  CHECK(lc.entries.size() == 1);
  CHECK(lc.entries[0].key == "kind");
  fs::remove(cfg);
}

TEST_CASE("full config overrides every default it names") {
  const fs::path cfg = write_tmp("full.cfg",
                                 "kind = nonsmooth\n"
                                 "beta = 0.5\n"
                                 "lambda0 = 1e-3\n"
                                 "grid.n = 128\n"
                                 "grid.g = 1.5\n"
                                 "solver.cfl = 0.25\n"
                                 "solver.pressure = on\n"
                                 "solver.mean_mode = literal\n"
                                 "solver.sup_stop = 100\n"
                                 "horizon = 2\n"
                                 "oracle.sup_mult = 25\n"
                                 "outputs.dir = runs/demo\n");
  const loaded_config lc = load_config(cfg.string());
  CHECK(lc.spec.beta == doctest::Approx(0.5));
  CHECK(lc.spec.grid_n == 128);
  CHECK(lc.spec.grid_g == doctest::Approx(1.5));
  CHECK(lc.spec.solver.cfl == doctest::Approx(0.25));
  CHECK(lc.spec.solver.mean == mean_mode::literal);
  CHECK(lc.spec.sup_stop_mult == doctest::Approx(100.0));
  CHECK(lc.spec.oracle_sup_mult == doctest::Approx(25.0));
  CHECK(lc.spec.horizon == doctest::Approx(2.0));
  CHECK(lc.spec.out_dir == "runs/demo");
  // nu0 derives from the overridden lambda0
  CHECK(lc.spec.nu0 == doctest::Approx(0.5 * std::sqrt(1e-3)));
  fs::remove(cfg);
}

TEST_CASE("config rejections carry the file position") {
  const fs::path unknown = write_tmp("unknown.cfg",
                                     "kind = smooth\n"
                                     "x = 1\n");
  std::string msg = thrown_message(unknown);
  CHECK(contains(msg, "unknown key 'x'"));
  CHECK(contains(msg, ":2:"));
  CHECK(contains(msg, unknown.string()));
  fs::remove(unknown);

  const fs::path dup = write_tmp("dup.cfg",
                                 "kind = smooth\n"
                                 "beta = 0\n"
                                 "beta = 0\n");
  msg = thrown_message(dup);
  CHECK(contains(msg, "duplicate key 'beta'"));
  CHECK(contains(msg, ":3:"));
  fs::remove(dup);

  const fs::path badnum = write_tmp("badnum.cfg",
                                    "kind = smooth\n"
                                    "lambda0 = abc\n");
  msg = thrown_message(badnum);
  CHECK(contains(msg, "needs a number"));
  CHECK(contains(msg, "'abc'"));
  fs::remove(badnum);

  const fs::path negbeta = write_tmp("negbeta.cfg",
                                     "kind = custom\n"
                                     "beta = -1\n");
  msg = thrown_message(negbeta);
  CHECK(contains(msg, "beta >= 0 required"));
  fs::remove(negbeta);

  const fs::path noval = write_tmp("noval.cfg", "kind =\n");
  msg = thrown_message(noval);
  CHECK(contains(msg, "has no value"));
  fs::remove(noval);

  const fs::path contra = write_tmp("contra.cfg",
                                    "kind = pressureless_exact\n"
                                    "beta = 1\n"
                                    "solver.pressure = on\n");
  msg = thrown_message(contra);
  CHECK(contains(msg, "pressureless_exact kind runs with solver.pressure = off"));
  fs::remove(contra);
}

TEST_CASE("sweep lists parse into ordered vectors") {
  const fs::path cfg = write_tmp("sweep.cfg",
                                 "kind = smooth\n"
                                 "sweep.kappas = 0.01, 0.05, 0.1\n"
                                 "sweep.lambda0s = 1e-4,1e-3\n");
  const loaded_config lc = load_config(cfg.string());
  REQUIRE(lc.sweep_kappas.size() == 3);
  CHECK(lc.sweep_kappas[0] == doctest::Approx(0.01));
  CHECK(lc.sweep_kappas[2] == doctest::Approx(0.1));
  REQUIRE(lc.sweep_lambda0s.size() == 2);
  CHECK(lc.sweep_lambda0s[1] == doctest::Approx(1e-3));
  fs::remove(cfg);
}

TEST_CASE("output directory resolution honors the environment root") {
  unsetenv("HYDROBLOW_OUT");
  CHECK(resolve_out_dir("runs/x") == fs::path("runs/x"));
  setenv("HYDROBLOW_OUT", "/tmp/hbroot", 1);
  CHECK(resolve_out_dir("runs/x") == fs::path("/tmp/hbroot/runs/x"));
  CHECK(resolve_out_dir("/abs/y") == fs::path("/abs/y"));
  unsetenv("HYDROBLOW_OUT");
}

TEST_CASE("csv writers are deterministic and carry the agreed headers") {
  const scenario_bundle b = tiny_steady_bundle();
  const fs::path p1 = fs::temp_directory_path() / "hydroblow_io_snap1.csv";
  const fs::path p2 = fs::temp_directory_path() / "hydroblow_io_snap2.csv";
  write_snapshots_csv(p1, b.traj);
  write_snapshots_csv(p2, b.traj);
  const std::string s1 = slurp(p1), s2 = slurp(p2);
  CHECK(s1 == s2);
  CHECK(s1.rfind("t,Z,a\n", 0) == 0);

  write_norms_csv(p1, b.traj);
  const std::string n1 = slurp(p1);
  CHECK(n1.rfind("t,sup,dZa0,mean,dt\n", 0) == 0);
  CHECK(n1.size() > 20);

  // steady bundles have no modulation rows, so only the header is written
  write_modulation_csv(p1, b);
  CHECK(slurp(p1) == "t,s,lambda,nu,E1,E2,res_mod1,res_mod2\n");
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("fits json mirrors the summary including null for nan") {
  fit_summary f;
  f.T = std::nan("");
  f.r2 = 0.75;
  f.beta_hat = 0.5;
  f.nu_inf = 2.0;
  f.log_law_tail = 1.0;
  f.decay_slope_E1 = -0.25;
  f.decay_slope_E2 = -1.0;
  const fs::path p = fs::temp_directory_path() / "hydroblow_io_fits.json";
  write_fits_json(p, f);
  const nlohmann::json j = nlohmann::json::parse(slurp(p));
  CHECK(j.at("T").is_null());
  CHECK(j.at("r2").get<double>() == doctest::Approx(0.75));
  CHECK(j.at("beta_hat").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("nu_inf").get<double>() == doctest::Approx(2.0));
  CHECK(j.at("log_law_tail").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("decay_slopes").at("E1").get<double>() == doctest::Approx(-0.25));
  CHECK(j.at("decay_slopes").at("E2").get<double>() == doctest::Approx(-1.0));
  fs::remove(p);
}

TEST_CASE("verdicts json keeps claim order and booleans") {
  std::vector<verdict> vs;
  vs.push_back({"first \"quoted\" claim", true, 1.5, 1.0, 0.5});
  vs.push_back({"second", false, 2.0, 0.0, 1e-3});
  const fs::path p = fs::temp_directory_path() / "hydroblow_io_verdicts.json";
  write_verdicts_json(p, vs);
  const nlohmann::json j = nlohmann::json::parse(slurp(p));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0].at("claim").get<std::string>() == "first \"quoted\" claim");
  CHECK(j[0].at("pass").get<bool>() == true);
  CHECK(j[0].at("measured").get<double>() == doctest::Approx(1.5));
  CHECK(j[1].at("pass").get<bool>() == false);
  CHECK(j[1].at("tolerance").get<double>() == doctest::Approx(1e-3));
  fs::remove(p);
}

TEST_CASE("manifest json carries command, version, echo, and verdict counts") {
  run_manifest m;
  m.command = "simulate";
  m.config_echo.push_back({"kind", "smooth", 1});
  m.config_echo.push_back({"grid.n", "512", 2});
  m.outputs.push_back("snapshots.csv");
  m.outputs.push_back("manifest.json");
  m.wall_seconds = 1.25;
  m.verdicts_passed = 4;
  m.verdicts_failed = 1;
  const fs::path p = fs::temp_directory_path() / "hydroblow_io_manifest.json";
  write_manifest_json(p, m);
  const nlohmann::json j = nlohmann::json::parse(slurp(p));
  CHECK(j.at("command").get<std::string>() == "simulate");
  CHECK(j.at("version").get<std::string>() == std::string(artifact_version));
  CHECK(j.at("config").at("kind").get<std::string>() == "smooth");
  CHECK(j.at("config").at("grid.n").get<std::string>() == "512");
  CHECK(j.at("outputs").size() == 2);
  CHECK(j.at("wall_time_seconds").get<double>() == doctest::Approx(1.25));
  CHECK(j.at("verdicts").at("passed").get<int>() == 4);
  CHECK(j.at("verdicts").at("failed").get<int>() == 1);
  fs::remove(p);
}

TEST_CASE("missing config file is a config error") {
  CHECK_THROWS_AS(load_config("/nonexistent/hydroblow.cfg"), config_error);
}
