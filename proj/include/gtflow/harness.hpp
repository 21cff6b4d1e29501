#pragma once

// Experiment orchestration: strict JSON configs, the six experiments behind the
// CLI, result records and their persistence, and deterministic parallel loops.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtflow/numeric.hpp"
#include "gtflow/params.hpp"

namespace gtflow {

inline constexpr const char* kVersion = "1.0.0";

// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

enum class ExperimentKind { verify, converge_kernel, converge_density, mc_correlations, spectrum, export_paths };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct ParamsBlock {
  int p = 2;
  double z_prime = 3;
  double w_prime = 1;
  Mode mode = Mode::floating;

  ModelParams model() const { return ModelParams(p, z_prime, w_prime, mode); }
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify;
  ParamsBlock params;
  std::vector<int> n_ladder;             // converge-*, mc-correlations (first entry)
  int n_max = 5;                         // verify
  bool exhaustive = false;               // verify: sweep p <= 3, z' in {p..p+2}, w' in {0,1,2}
  std::vector<double> times;             // gaps (converge-kernel, mc-correlations) or times (spectrum)
  std::uint64_t sweeps = 0;              // mc-correlations sweeps, export-paths trajectories
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-6;
  std::vector<std::vector<double>> grid;  // evaluation points
  double margin = 0.05;                  // interior guard for continuum grids and histogram range
  int samples = 20;                      // spectrum: random interior points
  int bins = 40;                         // mc-correlations: one-point bins
  std::vector<int> pair_bins{4, 5};      // mc-correlations: time-0 x time-t bins
  int n_target = 30;                     // export-paths
  int jobs = 1;
  std::string out = "out";

  /// Defaults for one experiment kind.
  static ExperimentConfig defaults(ExperimentKind kind);

  /// Defaults overlaid with the JSON document; unknown keys throw ConfigError.
  static ExperimentConfig from_json(ExperimentKind kind, const nlohmann::json& doc);

  /// Throws ConfigError on any inconsistency (and ParameterError via ModelParams).
  void validate() const;

  /// Canonical JSON form; `with_runtime` adds jobs and out, which do not affect results.
  nlohmann::json to_json(bool with_runtime = true) const;
};

struct CheckResult {
  std::string name;
  std::string anchor;  // identity or statement the check exercises
  double measured = 0;
  double reference = 0;
  double tolerance = 0;
  bool passed = false;
  std::string detail;
};

struct ResultRecord {
  std::string experiment;
  std::string id;  // experiment name + hash of the result-relevant config
  std::string version = kVersion;
  double wall_clock_seconds = 0;
  nlohmann::json config;
  std::vector<CheckResult> checks;
  // CSV tables written next to result.json: file name -> contents.
  std::map<std::string, std::string> tables;

  bool passed() const;
  nlohmann::json to_json(bool with_timing = true) const;
};

/// Runs f(i) for i in [0, n) on `jobs` threads; indices are claimed from a shared counter.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f);

ResultRecord run_verify(const ExperimentConfig& config);
ResultRecord run_converge_kernel(const ExperimentConfig& config);
ResultRecord run_converge_density(const ExperimentConfig& config);
ResultRecord run_mc_correlations(const ExperimentConfig& config);
ResultRecord run_spectrum(const ExperimentConfig& config);
ResultRecord run_export_paths(const ExperimentConfig& config);

/// Validates and dispatches on config.kind.
ResultRecord run_experiment(const ExperimentConfig& config);

/// Writes result.json and the CSV tables into <out>/<experiment>-<timestamp>/; returns that directory.
std::filesystem::path write_result(const ResultRecord& record, const std::filesystem::path& out);

/// True when errors[i+1] < errors[i] along the ladder, allowing at most one
/// inversion of at most 10%.
bool ladder_decreasing(const std::vector<double>& errors);

/// Wilson score interval at z standard deviations.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

}  // namespace gtflow
