#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qlb/experiment.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify locality bounds for dissipative quantum lattice dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format;
  double tolerance = qlb::kDefaultSlackTolerance;
  int models = 50;
  std::uint64_t seed = 1;
  int max_sites = 4;

  const char* commands[] = {"certify-lrb",          "certify-truncation", "certify-local",
                            "certify-correlations", "fixed-point",        "sweep"};
  const char* help[] = {"quasi-locality bounds (appLRB, NVZ, frLRB, gen_LRB, poly_lrb)",
                        "finite-range truncation error (dyn_diff)",
                        "strictly local approximations (gen_sl_app, lemma_nos, sl_poly)",
                        "correlation decay (g_decaying, cor_general, cor_poly)",
                        "dynamical fixed point (steadystate1, fp_exponential, fp_poly)",
                        "every theorem listed in the config"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], help[i]);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: config output.dir)");
    sub->add_option("--format", format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--tolerance", tolerance, "relative slack tolerance");
  }
  CLI::App* suite = app.add_subcommand("random-suite", "domination suite over seeded random models");
  suite->add_option("--models", models, "number of models")->check(CLI::NonNegativeNumber);
  suite->add_option("--seed", seed, "seed of the first model");
  suite->add_option("--max-sites", max_sites, "largest model size (at most 5)")->check(CLI::Range(3, 5));
  suite->add_option("--out", out_dir, "output directory")->default_val("out");
  suite->add_option("--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  suite->add_option("--tolerance", tolerance, "relative slack tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    qlb::RunResult result;
    std::string command = app.get_subcommands().front()->get_name();
    if (command == "random-suite") {
      qlb::SuiteOptions options;
      options.models = models;
      options.seed = seed;
      options.params.max_sites = max_sites;
      options.params.d_max = 2.0 * (max_sites - 1);
      options.tol = tolerance;
      result = qlb::run_random_suite(options);
      if (format.empty()) format = "both";
    } else {
      const qlb::ExperimentConfig config = qlb::load_config(config_path);
      result = qlb::run_experiment(config, qlb::select_theorems(config, command), tolerance);
      result.manifest.command = command;
      if (out_dir.empty()) out_dir = config.output.dir;
      if (format.empty()) format = config.output.format;
    }
    qlb::write_outputs(result, out_dir, format);
    int fails = 0;
    int invalid = 0;
    for (const auto& [name, t] : result.manifest.tallies) {
      fails += t.fail;
      invalid += t.invalid;
      std::cout << name << ": " << t.pass << " pass, " << t.fail << " fail, " << t.invalid
                << " outside hypotheses";
      if (t.has_slack) std::cout << ", worst slack " << qlb::format_double(t.worst_slack);
      std::cout << '\n';
    }
    std::cout << result.reports.size() << " reports written to " << out_dir << '\n';
    return fails == 0 ? kPass : kViolation;
  } catch (const qlb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qlb::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const qlb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
