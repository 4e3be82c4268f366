#pragma once

#include <span>
#include <string>
#include <vector>

#include "levycollapse/ensemble.hpp"

namespace levycollapse {

struct CheckLine {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct TestReport {
  std::string test;
  bool passed = true;
  std::vector<CheckLine> lines;
  void add(CheckLine line) {
    passed = passed && line.passed;
    lines.push_back(std::move(line));
  }
};

// Collapse-frequency z-scores against the initial occupation probabilities;
// passes when every |z| stays inside the mean threshold.
TestReport born_test(const ScenarioConfig& config, const EnsembleResult& result);

// Conservation of the posterior mean energy at the checkpoints.
TestReport martingale_test(const ScenarioConfig& config,
                           const EnsembleResult& result);

// Posterior energy variance: pairwise non-increasing within the step
// threshold, and the final mean below the exact coherence-decay bound
// (1/2) sum dE_mn^2 sqrt(p_m p_n) e^{-Gamma_mn T} plus 4 SE.
TestReport supermartingale_test(const ScenarioConfig& config,
                                const EnsembleResult& result);

// Frobenius distance between the ensemble-mean state and the analytic mean
// at the checkpoints, against path-bootstrap standard errors.
TestReport mean_density_test(const ScenarioConfig& config,
                             const EnsembleResult& result,
                             std::size_t bootstrap_resamples = 200);

// Exceedance of the exponential martingale against the variance bound at
// the given times, sampled directly from the base law.
TestReport exceedance_test(const LevyModel& model, double kappa, double eps,
                           std::span<const double> times, std::size_t paths,
                           std::uint64_t seed);

std::string format_report(const TestReport& report);

// summary.json payload: config, hash, version, reports, collapse stats.
std::string summary_json(const ScenarioConfig& config, const EnsembleResult& result,
                         std::span<const TestReport> reports);

}  // namespace levycollapse
