#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "levycollapse/config.hpp"
#include "levycollapse/decoherence.hpp"
#include "levycollapse/ensemble.hpp"
#include "levycollapse/information.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/reduction.hpp"
#include "levycollapse/reports.hpp"
#include "levycollapse/rng.hpp"
#include "levycollapse/stats.hpp"
#include "levycollapse/validate.hpp"

namespace lc = levycollapse;

namespace {

void criterion_line(int number, const char* label, bool passed) {
  std::printf("CRITERION %d %s: %s\n", number, label, passed ? "PASS" : "FAIL");
  std::fflush(stdout);
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

lc::ComplexMatrix pure_density(double p1, double p2) {
  lc::ComplexVector v(2);
  v << std::sqrt(p1), std::sqrt(p2);
  return v * v.adjoint();
}

lc::ScenarioConfig two_level_scenario(const std::string& tag, lc::NoiseKind kind,
                                      double e2) {
  lc::ScenarioConfig c;
  c.name = tag;
  c.hamiltonian = lc::ComplexMatrix::Zero(2, 2);
  c.hamiltonian(1, 1) = e2;
  c.initial_state = pure_density(0.3, 0.7);
  c.kind = kind;
  switch (kind) {
    case lc::NoiseKind::Brownian:
      c.diffusion = 1.0;
      break;
    case lc::NoiseKind::Poisson:
      c.intensity = 1.0;
      break;
    case lc::NoiseKind::CompoundPoissonExp:
      c.intensity = 1.0;
      c.jump_rate = 2.0;
      break;
    case lc::NoiseKind::Gamma:
      c.intensity = 1.0;
      c.scale = 1.0;
      break;
  }
  c.lambda = 1.0;
  c.steps = 100;
  c.threads = 1;
  return c;
}

// The gamma kind uses the narrower spectrum so both couplings stay inside
// its exponent domain.
std::vector<lc::ScenarioConfig> kind_scenarios() {
  return {two_level_scenario("brownian", lc::NoiseKind::Brownian, 1.0),
          two_level_scenario("poisson", lc::NoiseKind::Poisson, 1.0),
          two_level_scenario("compound-poisson-exp",
                             lc::NoiseKind::CompoundPoissonExp, 1.0),
          two_level_scenario("gamma", lc::NoiseKind::Gamma, 0.5)};
}

double pair_rate(const lc::ScenarioConfig& config) {
  return lc::gamma_rate(config.model(), config.lambda, 0.0,
                        config.hamiltonian(1, 1).real());
}

std::vector<double> uniform_grid(double horizon, int steps) {
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        horizon * static_cast<double>(i) / static_cast<double>(steps);
  return grid;
}

// Least-squares decay rate of the ensemble-mean coherence between the two
// levels, taken over the stored checkpoints.
double fitted_decay_rate(const lc::EnsembleResult& result) {
  const std::size_t tri = result.triangle_size();
  const std::size_t idx = result.index_of(0, 1);
  std::vector<double> x, y;
  for (std::size_t ck = 0; ck < result.checkpoints.size(); ++ck) {
    const double s = result.mean_coherence[ck * tri + idx];
    if (s <= 0.0) continue;
    x.push_back(result.grid[result.checkpoints[ck]]);
    y.push_back(std::log(s));
  }
  return -lc::regression_slope(x, y);
}

}  // namespace

TEST(Acceptance, BornRuleFrequencies) {
  const double tolerance = 3.0 * std::sqrt(0.21 / 5000.0);
  bool all = true;
  std::uint64_t seed = 101;
  for (lc::ScenarioConfig config : kind_scenarios()) {
    config.paths = 5000;
    config.seed = seed++;
    config.horizon = 20.0 / pair_rate(config);
    const auto start = std::chrono::steady_clock::now();
    const lc::EnsembleResult result = lc::run_ensemble(config);
    const double seconds = elapsed_seconds(start);

    std::size_t to_upper = 0;
    for (const lc::PathSummary& p : result.paths)
      if (p.detected && *p.detected == 1) ++to_upper;
    const double freq =
        static_cast<double>(to_upper) / static_cast<double>(result.paths.size());

    const bool ok = std::abs(freq - 0.7) <= tolerance &&
                    result.collapse_fraction >= 0.999 && seconds < 60.0;
    EXPECT_TRUE(ok) << config.name << ": freq=" << freq
                    << " collapse_fraction=" << result.collapse_fraction
                    << " seconds=" << seconds;
    all = all && ok;
  }
  criterion_line(1, "born-rule collapse frequencies", all);
  EXPECT_TRUE(all);
}

TEST(Acceptance, EnergyMartingaleLaws) {
  lc::ScenarioConfig config = kind_scenarios().front();
  config.paths = 10000;
  config.seed = 202;
  config.horizon = 16.0;
  const lc::EnsembleResult result = lc::run_ensemble(config);
  const lc::TestReport mean_law = lc::martingale_test(config, result);
  const lc::TestReport variance_law = lc::supermartingale_test(config, result);
  const bool ok = mean_law.passed && variance_law.passed;
  EXPECT_TRUE(mean_law.passed) << lc::format_report(mean_law);
  EXPECT_TRUE(variance_law.passed) << lc::format_report(variance_law);
  criterion_line(2, "energy martingale and variance supermartingale", ok);
  EXPECT_TRUE(ok);
}

TEST(Acceptance, ClosedFormSolvesTheSde) {
  const lc::LevyModel model = lc::LevyModel::brownian(0.0, 1.0);
  const lc::Signal signal({0.0, 1.0}, {0.3, 0.7}, 1.0);
  lc::ComplexMatrix p1 = lc::ComplexMatrix::Zero(2, 2);
  lc::ComplexMatrix p2 = lc::ComplexMatrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  p2(1, 1) = 1.0;
  const lc::EnergySpectrum spectrum({0.0, 1.0}, {p1, p2}, 1.0);
  lc::ComplexVector psi0(2);
  psi0 << std::sqrt(0.3), std::sqrt(0.7);

  const double horizon = 5.0;
  const int fine_steps = 10000;  // dt = 5e-4, halving target of dt = 1e-3
  const std::vector<double> fine = uniform_grid(horizon, fine_steps);
  const std::vector<double> coarse = uniform_grid(horizon, fine_steps / 2);

  double sum_coarse = 0.0;
  double sum_fine = 0.0;
  const int paths = 50;
  for (int p = 0; p < paths; ++p) {
    lc::PhiloxRng rng(505, static_cast<std::uint64_t>(p));
    const int outcome = lc::sample_outcome(signal, rng);
    const lc::InformationPath xi =
        lc::sample_information_path(model, signal, outcome, fine, rng);

    std::vector<double> closed(fine.size());
    std::vector<double> h(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const std::vector<double> pi =
          lc::posterior_probabilities(model, signal, xi.values[i], fine[i]);
      closed[i] = pi[1];
      h[i] = pi[1];  // energies are (0, 1)
    }
    const std::vector<double> w = lc::innovations_path(model, xi, h, 1.0);
    std::vector<double> dw_fine(fine.size() - 1);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) dw_fine[i] = w[i + 1] - w[i];
    std::vector<double> dw_coarse(coarse.size() - 1);
    for (std::size_t i = 0; i < dw_coarse.size(); ++i)
      dw_coarse[i] = dw_fine[2 * i] + dw_fine[2 * i + 1];

    const std::vector<lc::ComplexVector> em_fine =
        lc::euler_maruyama_vector(spectrum, psi0, 1.0, fine, dw_fine);
    const std::vector<lc::ComplexVector> em_coarse =
        lc::euler_maruyama_vector(spectrum, psi0, 1.0, coarse, dw_coarse);

    double err_coarse = 0.0;
    double err_fine = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      const double reference = closed[2 * j];
      err_coarse =
          std::max(err_coarse, std::abs(std::norm(em_coarse[j](1)) - reference));
      err_fine =
          std::max(err_fine, std::abs(std::norm(em_fine[2 * j](1)) - reference));
    }
    sum_coarse += err_coarse;
    sum_fine += err_fine;
  }
  const double mean_coarse = sum_coarse / paths;
  const double mean_fine = sum_fine / paths;
  const double ratio = mean_coarse / mean_fine;
  const bool ok = mean_coarse <= 0.05 && ratio >= 1.2 && ratio <= 1.7;
  EXPECT_TRUE(ok) << "mean sup deviation " << mean_coarse << " at dt=1e-3, "
                  << mean_fine << " at dt=5e-4, halving ratio " << ratio;
  criterion_line(3, "closed form solves the reduction equation", ok);
  EXPECT_TRUE(ok);
}

TEST(Acceptance, RateFormulaConsistency) {
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  double worst = 0.0;
  for (const lc::ScenarioConfig& config : kind_scenarios()) {
    const lc::LevyModel model = config.model();
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double lambda = 0.1 + 0.1 * i;
        const double e_m = 0.2;
        const double e_n = e_m + 0.05 + 0.1 * j;
        const double closed = lc::gamma_rate(model, lambda, e_m, e_n);
        const double integral = lc::gamma_rate_integral(model, lambda, e_m, e_n);
        const double sinh_form = lc::gamma_rate_sinh(model, lambda, e_m, e_n);
        const double spread = std::max({std::abs(integral - closed),
                                        std::abs(sinh_form - closed),
                                        std::abs(sinh_form - integral)}) /
                              closed;
        worst = std::max(worst, spread);
        all = all && spread <= 1e-6;
      }
    }
  }
  const double seconds = elapsed_seconds(start);
  const bool ok = all && seconds < 10.0;
  EXPECT_TRUE(ok) << "worst relative spread " << worst << ", " << seconds
                  << " s";
  criterion_line(4, "damping-rate formulas agree across representations", ok);
  EXPECT_TRUE(ok);
}

TEST(Acceptance, LindbladMeanDuality) {
  bool all = true;
  double worst = 0.0;
  for (const lc::ScenarioConfig& config : kind_scenarios()) {
    const lc::LevyModel model = config.model();
    const lc::EnergySpectrum spectrum = config.spectrum();
    const lc::DensityMatrix rho0 = config.initial_density();
    const double horizon = 2.0 / pair_rate(config);
    for (int k = 1; k <= 10; ++k) {
      const double t = horizon * k / 10.0;
      const lc::ComplexMatrix numeric =
          lc::integrate_lindblad(rho0, spectrum, model, config.lambda, t, 400);
      const lc::ComplexMatrix closed =
          lc::mean_density(rho0, spectrum, model, config.lambda, t).matrix();
      const double err = (numeric - closed).norm();
      worst = std::max(worst, err);
      all = all && err <= 1e-6;
    }
  }
  EXPECT_TRUE(all) << "worst Frobenius gap " << worst;
  criterion_line(5, "generator integration matches the analytic mean state", all);
  EXPECT_TRUE(all);
}

TEST(Acceptance, EnsembleMeanDecoherence) {
  bool all = true;
  std::uint64_t seed = 606;
  for (lc::ScenarioConfig config : kind_scenarios()) {
    const double rate = pair_rate(config);
    config.paths = 20000;
    config.seed = seed++;
    config.horizon = 2.0 / rate;
    const lc::EnsembleResult result = lc::run_ensemble(config, 5);
    const lc::TestReport report = lc::mean_density_test(config, result);
    const double fitted = fitted_decay_rate(result);
    const bool ok = report.passed && std::abs(fitted - rate) <= 0.1 * rate;
    EXPECT_TRUE(report.passed) << config.name << "\n" << lc::format_report(report);
    EXPECT_NEAR(fitted, rate, 0.1 * rate) << config.name;
    all = all && ok;
  }
  criterion_line(6, "ensemble mean matches the damped state", all);
  EXPECT_TRUE(all);
}

TEST(Acceptance, EnergyScaleAmplification) {
  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  const double base = lc::gamma_rate(poisson, 1.0, -0.005, 0.005);
  const double mid = lc::gamma_rate(poisson, 1.0, 2.495, 2.505);
  const double high = lc::gamma_rate(poisson, 1.0, 4.995, 5.005);
  const bool exact_ok =
      std::abs(mid / base - std::exp(2.5)) <= 0.01 * std::exp(2.5) &&
      std::abs(high / base - std::exp(5.0)) <= 0.01 * std::exp(5.0);
  EXPECT_TRUE(exact_ok) << "ratios " << mid / base << ", " << high / base;

  lc::ScenarioConfig low_config = two_level_scenario("poisson", lc::NoiseKind::Poisson, 0.0);
  low_config.hamiltonian(0, 0) = -0.005;
  low_config.hamiltonian(1, 1) = 0.005;
  low_config.paths = 5000;
  low_config.seed = 707;
  low_config.horizon = 2.0 / base;

  lc::ScenarioConfig shifted_config = low_config;
  shifted_config.hamiltonian(0, 0) = 2.495;
  shifted_config.hamiltonian(1, 1) = 2.505;
  shifted_config.seed = 708;
  shifted_config.horizon = 2.0 / mid;

  const double low_rate = fitted_decay_rate(lc::run_ensemble(low_config, 5));
  const double shifted_rate =
      fitted_decay_rate(lc::run_ensemble(shifted_config, 5));
  const bool sampled_ok = shifted_rate >= 10.0 * low_rate;
  EXPECT_TRUE(sampled_ok) << "fitted rates " << low_rate << " vs " << shifted_rate;

  const bool ok = exact_ok && sampled_ok;
  criterion_line(7, "energy-scale amplification of damping", ok);
  EXPECT_TRUE(ok);
}

TEST(Acceptance, AtomicClockCoherenceBound) {
  const double bound = lc::clock_bound(3.801e-5, 1.0);
  char formatted[32];
  std::snprintf(formatted, sizeof(formatted), "%.4g", bound);
  const bool value_ok = std::string(formatted) == "5.537e+21";
  const bool comparison_ok = lc::kPlanckSigmaSquared < bound;
  const bool ok = value_ok && comparison_ok;
  EXPECT_TRUE(ok) << "bound " << formatted << ", comparison "
                  << (comparison_ok ? "within bound" : "exceeds bound");
  criterion_line(8, "hyperfine clock coherence bound", ok);
  EXPECT_TRUE(ok);
}

TEST(Acceptance, MartingaleExceedanceBounds) {
  struct TailCase {
    const char* tag;
    lc::LevyModel model;
    double kappa;
  };
  const std::vector<TailCase> cases = {
      {"brownian", lc::LevyModel::brownian(0.2, 1.0), 0.7},
      {"poisson", lc::LevyModel::poisson(1.0), 0.7},
      {"compound-poisson-exp", lc::LevyModel::compound_poisson_exp(1.0, 2.0), 0.8},
      {"gamma", lc::LevyModel::gamma(1.0, 1.0), 0.6}};
  const std::vector<double> times = {1.0, 5.0, 25.0};
  bool all = true;
  std::uint64_t seed = 909;
  for (const TailCase& c : cases) {
    const lc::TestReport report =
        lc::exceedance_test(c.model, c.kappa, 0.1, times, 10000, seed++);
    EXPECT_TRUE(report.passed) << c.tag << "\n" << lc::format_report(report);
    all = all && report.passed;
  }
  criterion_line(9, "exceedance stays under the variance bound", all);
  EXPECT_TRUE(all);
}

TEST(Acceptance, PropertySuites) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<lc::CheckResult> checks = lc::validate_all(1);
  const double seconds = elapsed_seconds(start);
  int failures = 0;
  for (const lc::CheckResult& check : checks)
    if (!check.passed) {
      ++failures;
      ADD_FAILURE() << check.name << ": " << check.detail;
    }
  const bool ok = failures == 0 && seconds < 600.0;
  EXPECT_TRUE(ok) << checks.size() << " checks, " << failures << " failures, "
                  << seconds << " s";
  criterion_line(10, "module property suites", ok);
  EXPECT_TRUE(ok);
}
