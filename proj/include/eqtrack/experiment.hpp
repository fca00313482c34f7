#pragma once

// Experiment pipeline behind the command-line tool: config parsing, stream
// construction, Monte Carlo runs and the CSV/JSON artifacts they produce.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eqtrack/solvers.hpp"

namespace eqtrack {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string scenario = "synthetic-static";  // synthetic-static | synthetic-drift | market | custom
  std::string solver = "conceptual";          // conceptual | stochastic
  SolverConfig solver_cfg;
  SolverConfig oracle_cfg = SolverConfig::oracle_defaults();
  int horizon = 0;  // 0 selects the scenario default
  int replications = 1;
  std::vector<double> deltas{0.1, 0.05, 0.01};
  std::optional<Vector> z0;
  std::optional<double> nu;     // fixed noise proxy instead of a fit
  std::optional<double> theta;  // tail parameter paired with a fixed nu
  std::vector<double> theta_grid{0.5, 1.0, 1.5, 2.0};
  int trajectory_files = -1;  // -1: min(replications, 100)
  std::string out_dir;
  nlohmann::json params = nlohmann::json::object();  // scenario block
  std::string base_dir = ".";                        // resolves relative data paths

  /// Reads a config document; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  nlohmann::json to_json() const;
  /// Throws ConfigError for out-of-range values.
  void validate() const;
  int effective_horizon() const;
  int effective_replications() const;
};

struct Scenario {
  ProblemStream stream;
  Vector z0;
  nlohmann::json seeds = nlohmann::json::object();
};

Scenario build_scenario(const ExperimentConfig& cfg);

/// Named file contents in write order; the manifest is last.
struct Artifacts {
  nlohmann::json manifest;
  std::vector<std::pair<std::string, std::string>> files;

  const std::string& file(const std::string& name) const;
};

Artifacts run_experiment(const ExperimentConfig& cfg);
void write_artifacts(const Artifacts& artifacts, const std::string& dir);

/// Constants of a config's stream without running it.
nlohmann::json inspect_experiment(const ExperimentConfig& cfg, bool per_slice = false);

/// Re-reads a run directory and checks the empirical series against the bounds.
/// Writes validation.csv (per-t margins) and validation.json next to the run.
nlohmann::json validate_artifacts(const std::string& dir);

}  // namespace eqtrack
