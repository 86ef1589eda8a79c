#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hydroblow/scenario.hpp"

namespace hydroblow {

struct config_entry {
  std::string key, value;
  int line = 0;
};

struct loaded_config {
  scenario_spec spec;                  // defaults applied and validated
  scenario_spec raw;                   // as parsed, so sweeps can re-derive
  std::vector<config_entry> entries;   // as written, for the manifest echo
  std::vector<double> sweep_kappas;    // sweep.* lists, empty unless given
  std::vector<double> sweep_lambda0s;
};

// Flat key=value file, one pair per line, '#' starts a comment. Unknown or
// duplicate keys and malformed values are rejected with "path:line:" prefixes.
loaded_config load_config(const std::string& path);

// Relative output directories are rooted at $HYDROBLOW_OUT when it is set.
std::filesystem::path resolve_out_dir(const std::string& dir);

// Shortest round-trip decimal form (printf %.17g); nan and inf by name.
std::string format17(double v);

void write_snapshots_csv(const std::filesystem::path& p, const trajectory& traj);
void write_norms_csv(const std::filesystem::path& p, const trajectory& traj);
void write_modulation_csv(const std::filesystem::path& p,
                          const scenario_bundle& b);
void write_fits_json(const std::filesystem::path& p, const fit_summary& fits);
void write_verdicts_json(const std::filesystem::path& p,
                         const std::vector<verdict>& vs);

inline constexpr const char* artifact_version = "hydroblow 0.1.0";

struct run_manifest {
  std::string command;
  std::string version = artifact_version;
  std::vector<config_entry> config_echo;
  std::vector<std::string> outputs;
  double wall_seconds = 0;  // the only timing in any output file
  int verdicts_passed = 0, verdicts_failed = 0;
};

void write_manifest_json(const std::filesystem::path& p, const run_manifest& m);

}  // namespace hydroblow
