#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlb/checks.hpp"
#include "qlb/config.hpp"
#include "qlb/random_model.hpp"
#include "qlb/report.hpp"

namespace qlb {

struct RunResult {
  std::vector<BoundReport> reports;
  RunManifest manifest;
  std::optional<FixedPointAnalysis> fixed_point;
};

/// Theorems run by a CLI subcommand (sweep: everything; without a fixed_point grid, everything else).
std::vector<std::string> theorem_family(const std::string& command);

ModelContext build_context(const ExperimentConfig& config);
StateFunctional build_state(const ExperimentConfig& config, const ModelContext& m);

/// Runs `theorems` over the config grids.
RunResult run_experiment(const ExperimentConfig& config, const std::vector<std::string>& theorems,
                         double tol = kDefaultSlackTolerance);

/// Theorems selected for a subcommand: the config's list (when present) restricted to the family.
std::vector<std::string> select_theorems(const ExperimentConfig& config, const std::string& command);

struct SuiteOptions {
  int models = 50;
  std::uint64_t seed = 1;
  RandomModelParams params;
  int t_points = 8;
  std::vector<double> R = {1, 2, 3};
  std::vector<double> r = {1, 2};
  double tol = kDefaultSlackTolerance;
};

/// Domination suite over seeded random models: t on [0, 2/v].
RunResult run_random_suite(const SuiteOptions& options);

/// All reports of one random model, as in run_random_suite.
std::vector<BoundReport> random_model_reports(const ModelContext& m, const SuiteOptions& options,
                                              std::uint64_t state_seed);

/// Writes reports.csv / reports.json and manifest.json into `dir`.
void write_outputs(const RunResult& result, const std::string& dir, const std::string& format);

/// Canonical hash of a config.
std::string config_hash(const ExperimentConfig& config);

}  // namespace qlb
