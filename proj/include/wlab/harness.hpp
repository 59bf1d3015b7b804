#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/fields.hpp"
#include "wlab/numerics.hpp"
#include "wlab/potentials.hpp"

namespace wlab::harness {

/// Thrown on configuration rejections (exit code 2 at the CLI).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical gate fails hard (exit code 3 at the CLI).
class GateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // potential
  std::string potential_name = "gaussian_well";
  std::map<std::string, double> potential_params;
  // magnetic
  double mu = 0.0;
  double magnetic_amp = 0.0;  // 0: a = 0
  double hbar_mu_cap = 4.0;   // gate: hbar * mu <= cap
  // problem
  double gamma = 0.0;
  int dimension = 1;
  // grid
  int grid_n = 512;
  double box_l = 4.0;
  std::string boundary = "dirichlet";
  // hbar schedule, descending
  std::vector<double> hbar_schedule;
  // localizer: radial plateau bump
  std::array<double, 3> localizer_center{};
  double localizer_radius = 1.0;
  double localizer_plateau = 0.5;
  // mollifier / tauberian scale
  double mollifier_T = 1.0;
  // epsilon rule is derived, never user-set: eps = hbar^(1-delta),
  // delta = (kappa - gamma) / (2 + kappa)
  std::uint64_t seed = 1;
  int threads = 1;
  bool deterministic_output = true;  // zero the wall-time column in CSV
  double p_max = 1.2;                // resolution gate scale
  double lambda_cut = 0.0;
  // command plumbing
  std::string dump_matrix;   // spectrum: optional binary dump path
  std::string records_csv;   // report: input records
  std::string assert_field = "normalized_residual";
  double assert_min = 0.8;

  double delta(double kappa) const { return (kappa - gamma) / (2.0 + kappa); }
};

/// Parses the JSON config text; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
/// Canonical re-serialization (sorted keys) and its FNV-1a hash.
std::string canonical_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct SweepRecord {
  double hbar = 0.0;
  double epsilon = 0.0;
  double localized_trace = 0.0;
  double weyl_term = 0.0;
  double residual = 0.0;
  double normalized_residual = 0.0;
  long grid_n = 0;
  double solver_residual = 0.0;
  double wall_time_s = 0.0;
  bool valid = true;
  std::string invalid_reason;
};

/// One record per scheduled hbar: mollify with eps = hbar^(1-delta),
/// discretize, eigensolve below lambda_cut, localized trace vs Weyl term.
/// Resolution-gate failures mark the record invalid and the sweep goes on.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg);

using FitResult = fit::LogLogFit;

/// log-log slope of the selected field against hbar over valid records.
FitResult fit_exponent(const std::vector<SweepRecord>& records,
                       const std::string& field);

/// CSV with the exact column set; deterministic bytes under
/// deterministic_output.
std::string to_csv(const std::vector<SweepRecord>& records,
                   bool deterministic_output = true);
std::string to_json(const std::vector<SweepRecord>& records,
                    bool deterministic_output = true);
std::vector<SweepRecord> parse_csv(const std::string& text);

/// Run manifest: canonical config, its hash, library version, seeds.
std::string manifest_json(const ExperimentConfig& cfg);

void write_file(const std::string& path, const std::string& content);

}  // namespace wlab::harness
