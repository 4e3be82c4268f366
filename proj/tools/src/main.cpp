#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levycollapse/config.hpp"
#include "levycollapse/decoherence.hpp"
#include "levycollapse/ensemble.hpp"
#include "levycollapse/errors.hpp"
#include "levycollapse/reports.hpp"
#include "levycollapse/validate.hpp"

namespace lc = levycollapse;

namespace {

void fail_json(const std::string& kind, const std::string& message) {
  nlohmann::json diag;
  diag["error"] = kind;
  diag["message"] = message;
  std::cerr << diag.dump() << '\n';
}

struct RunOptions {
  std::string scenario;
  std::string config_file;
  std::string out_dir;
  long long paths = -1;
  long long steps = -1;
  long long threads = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--scenario", opts.scenario,
                  "built-in scenario name (see `scenario list`)");
  cmd->add_option("--config", opts.config_file, "scenario description file (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--paths", opts.paths, "override the number of Monte Carlo paths")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--steps", opts.steps, "override the number of grid steps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 selects hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&opts](const std::uint64_t& v) {
           opts.seed = v;
           opts.seed_set = true;
         },
         "master random seed");
  cmd->add_option("--out", opts.out_dir, "output directory");
}

lc::ScenarioConfig resolve_config(const RunOptions& opts) {
  if (!opts.scenario.empty() && !opts.config_file.empty())
    throw lc::ConfigInvalid("--scenario and --config are mutually exclusive");
  lc::ScenarioConfig config =
      !opts.config_file.empty()
          ? lc::load_config(opts.config_file)
          : lc::preset_scenario(opts.scenario.empty() ? "appendix-a" : opts.scenario);
  if (opts.paths > 0) config.paths = static_cast<int>(opts.paths);
  if (opts.steps > 0) config.steps = static_cast<int>(opts.steps);
  if (opts.threads >= 0) config.threads = static_cast<int>(opts.threads);
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.out_dir.empty()) {
    config.output_dir = opts.out_dir;
  } else if (const char* env = std::getenv("LEVYCOLLAPSE_OUTPUT_DIR");
             env != nullptr && *env != '\0') {
    config.output_dir = env;
  }
  return config;
}

std::filesystem::path prepare_out_dir(const lc::ScenarioConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_simulate(const RunOptions& opts, long long path_index) {
  const lc::ScenarioConfig config = resolve_config(opts);
  const lc::SimulatedPath path =
      lc::simulate_path(config, static_cast<std::uint64_t>(path_index));
  const std::filesystem::path dir = prepare_out_dir(config);
  const std::filesystem::path file = dir / "path_series.csv";
  lc::write_path_series_csv(file.string(), path);
  std::printf("wrote %s\n", file.string().c_str());
  const std::string status =
      path.detected
          ? "collapse detected at level " + std::to_string(*path.detected + 1)
          : std::string("no collapse within the horizon");
  std::printf("outcome level %d; %s\n", path.outcome + 1, status.c_str());
  return 0;
}

int run_ensemble_cmd(const RunOptions& opts) {
  const lc::ScenarioConfig config = resolve_config(opts);
  const lc::EnsembleResult result = lc::run_ensemble(config);

  std::vector<lc::TestReport> reports;
  reports.push_back(lc::born_test(config, result));
  reports.push_back(lc::martingale_test(config, result));
  reports.push_back(lc::supermartingale_test(config, result));
  reports.push_back(lc::mean_density_test(config, result));

  const std::filesystem::path dir = prepare_out_dir(config);
  lc::write_ensemble_series_csv((dir / "ensemble_series.csv").string(), result);
  lc::write_checkpoints_csv((dir / "checkpoints.csv").string(), result);
  lc::write_outcomes_csv((dir / "outcomes.csv").string(), result);
  {
    const std::string summary = lc::summary_json(config, result, reports);
    FILE* f = std::fopen((dir / "summary.json").string().c_str(), "wb");
    if (f == nullptr) throw lc::Error("cannot write summary.json");
    std::fwrite(summary.data(), 1, summary.size(), f);
    std::fclose(f);
  }

  bool all_passed = true;
  for (const lc::TestReport& report : reports) {
    std::fputs(lc::format_report(report).c_str(), stdout);
    all_passed = all_passed && report.passed;
  }
  std::printf("collapse fraction %.6g (%zu of %zu paths)\n", result.collapse_fraction,
              result.collapsed_count, result.paths.size());
  std::printf("wrote %s, %s, %s, %s\n", (dir / "ensemble_series.csv").string().c_str(),
              (dir / "checkpoints.csv").string().c_str(),
              (dir / "outcomes.csv").string().c_str(),
              (dir / "summary.json").string().c_str());
  std::printf("RESULT %s\n", all_passed ? "PASS" : "FAIL");
  return all_passed ? 0 : 1;
}

int run_decoherence(const RunOptions& opts) {
  const lc::ScenarioConfig config = resolve_config(opts);
  const std::vector<lc::DecoherencePair> table =
      lc::decoherence_table(config.spectrum(), config.model(), config.lambda);
  std::printf("m,n,e_m,e_n,gamma,q_eff\n");
  for (const lc::DecoherencePair& row : table)
    std::printf("%d,%d,%.17g,%.17g,%.17g,%.17g\n", row.m + 1, row.n + 1, row.e_m,
                row.e_n, row.gamma, row.q_eff);
  return 0;
}

int run_clock_bound(const std::string& delta_e, const std::string& ramsey) {
  const double de = lc::parse_quantity(delta_e);
  const double t = lc::parse_quantity(ramsey);
  const double bound = lc::clock_bound(de, t);
  std::printf("sigma^2 < %.4g MeV^-2 s^-1\n", bound);
  std::printf("proposed sigma^2 = %.2g MeV^-2 s^-1: %s\n", lc::kPlanckSigmaSquared,
              lc::kPlanckSigmaSquared < bound ? "within bound" : "excluded");
  return 0;
}

int run_validate(std::uint64_t seed) {
  const std::vector<lc::CheckResult> checks = lc::validate_all(seed);
  std::size_t failed = 0;
  for (const lc::CheckResult& check : checks) {
    std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                check.detail.c_str());
    if (!check.passed) ++failed;
  }
  std::printf("%zu checks, %zu failed\n", checks.size(), failed);
  return failed == 0 ? 0 : 1;
}

int run_scenario_list() {
  for (const std::string& name : lc::preset_names()) {
    const lc::ScenarioConfig config = lc::preset_scenario(name);
    std::printf("%s: %s noise, %d levels, horizon %.4g\n", name.c_str(),
                lc::to_string(config.kind).c_str(),
                config.spectrum().num_levels(), config.horizon);
  }
  std::printf("custom: pass --config <file> to any command\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation and analysis of energy-driven quantum state reduction under "
      "Levy information noise"};
  app.require_subcommand(1);

  RunOptions sim_opts, ens_opts, dec_opts;
  long long path_index = 0;
  std::string delta_e = "3.801e-5 eV", ramsey = "1 s";
  std::uint64_t validate_seed = 1;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "evolve a single conditional path and write its time series");
  add_run_options(simulate, sim_opts);
  simulate->add_option("--path-index", path_index, "which path stream to realize")
      ->check(CLI::NonNegativeNumber);

  CLI::App* ensemble = app.add_subcommand(
      "ensemble", "run a Monte Carlo ensemble with its statistical test reports");
  add_run_options(ensemble, ens_opts);

  CLI::App* decoherence = app.add_subcommand(
      "decoherence", "print the pairwise decoherence-rate table as CSV");
  add_run_options(decoherence, dec_opts);

  CLI::App* clock = app.add_subcommand(
      "clock-bound", "noise-strength bound implied by an atomic-clock coherence time");
  clock->add_option("--delta-e", delta_e, "superposition energy gap (e.g. 3.801e-5 eV)");
  clock->add_option("--ramsey", ramsey, "coherence time (e.g. 1 s)");

  CLI::App* validate =
      app.add_subcommand("validate", "run the full property-check suite");
  validate->add_option("--seed", validate_seed, "seed for the stochastic checks");

  CLI::App* scenario = app.add_subcommand("scenario", "inspect built-in scenarios");
  scenario->require_subcommand(1);
  CLI::App* scenario_list = scenario->add_subcommand("list", "list scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    fail_json("usage", e.what());
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_opts, path_index);
    if (ensemble->parsed()) return run_ensemble_cmd(ens_opts);
    if (decoherence->parsed()) return run_decoherence(dec_opts);
    if (clock->parsed()) return run_clock_bound(delta_e, ramsey);
    if (validate->parsed()) return run_validate(validate_seed);
    if (scenario->parsed() && scenario_list->parsed()) return run_scenario_list();
  } catch (const lc::ConfigInvalid& e) {
    fail_json("config", e.what());
    return 2;
  } catch (const lc::Error& e) {
    fail_json("runtime", e.what());
    return 2;
  } catch (const std::exception& e) {
    fail_json("internal", e.what());
    return 2;
  }
  return 2;
}
