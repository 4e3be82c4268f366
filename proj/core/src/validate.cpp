#include "levycollapse/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "levycollapse/config.hpp"
#include "levycollapse/decoherence.hpp"
#include "levycollapse/ensemble.hpp"
#include "levycollapse/errors.hpp"
#include "levycollapse/information.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/quantum.hpp"
#include "levycollapse/reduction.hpp"
#include "levycollapse/reports.hpp"
#include "levycollapse/rng.hpp"
#include "levycollapse/stats.hpp"

namespace levycollapse {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void push(std::vector<CheckResult>& out, std::string name, bool passed,
          std::string detail) {
  out.push_back({std::move(name), passed, std::move(detail)});
}

template <typename E, typename F>
bool raises(F&& f) {
  try {
    f();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

struct TestModel {
  const char* tag;
  LevyModel model;
  double kappa_mgf;   // bounded second exponential moment at the test times
  double kappa_tail;  // informative variance bound at t = 25
};

std::vector<TestModel> test_models() {
  return {
      {"brownian", LevyModel::brownian(0.2, 1.0), 1.0, 0.7},
      {"poisson", LevyModel::poisson(1.0), 0.7, 0.7},
      {"compound-poisson-exp", LevyModel::compound_poisson_exp(1.0, 2.0), 0.5, 0.8},
      {"gamma", LevyModel::gamma(1.0, 1.0), 0.3, 0.6},
  };
}

struct TwoLevelScenario {
  const char* tag;
  LevyModel model;
  double e1;
  double e2;
};

// Couplings lambda E_j stay inside each exponent domain (lambda = 1).
std::vector<TwoLevelScenario> two_level_scenarios() {
  return {
      {"brownian", LevyModel::brownian(0.0, 1.0), 0.0, 1.0},
      {"poisson", LevyModel::poisson(1.0), 0.0, 1.0},
      {"compound-poisson-exp", LevyModel::compound_poisson_exp(1.0, 2.0), 0.0, 1.0},
      {"gamma", LevyModel::gamma(1.0, 1.0), 0.0, 0.5},
  };
}

EnergySpectrum two_level_spectrum(double e1, double e2, double hbar = 1.0) {
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix p2 = ComplexMatrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  p2(1, 1) = 1.0;
  return EnergySpectrum({e1, e2}, {p1, p2}, hbar);
}

PureState start_state() {
  ComplexVector v(2);
  v << std::sqrt(0.3), std::sqrt(0.7);
  return PureState(v);
}

Signal start_signal(double e1, double e2, double lambda = 1.0) {
  return Signal({e1, e2}, {0.3, 0.7}, lambda);
}

std::vector<double> make_grid(double horizon, int steps) {
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        horizon * static_cast<double>(i) / static_cast<double>(steps);
  grid.front() = 0.0;
  grid.back() = horizon;
  return grid;
}

ScenarioConfig two_level_config(const TwoLevelScenario& sc, std::uint64_t seed,
                                double horizon, int steps, int paths) {
  ScenarioConfig c;
  c.name = "validate";
  c.hamiltonian = ComplexMatrix::Zero(2, 2);
  c.hamiltonian(0, 0) = sc.e1;
  c.hamiltonian(1, 1) = sc.e2;
  ComplexVector v(2);
  v << std::sqrt(0.3), std::sqrt(0.7);
  c.initial_state = v * v.adjoint();
  c.kind = sc.model.kind();
  c.drift = sc.model.drift();
  c.diffusion = sc.model.diffusion();
  c.intensity = sc.model.intensity();
  c.jump_rate = sc.model.jump_rate();
  c.scale = sc.model.scale();
  c.lambda = 1.0;
  c.horizon = horizon;
  c.steps = steps;
  c.paths = paths;
  c.seed = seed;
  c.threads = 1;
  return c;
}

ScenarioConfig small_brownian_config(std::uint64_t seed) {
  ScenarioConfig c;
  c.name = "validate";
  c.hamiltonian = ComplexMatrix::Zero(2, 2);
  c.hamiltonian(1, 1) = 1.0;
  ComplexVector v(2);
  v << std::sqrt(0.3), std::sqrt(0.7);
  c.initial_state = v * v.adjoint();
  c.kind = NoiseKind::Brownian;
  c.drift = 0.0;
  c.diffusion = 1.0;
  c.lambda = 1.0;
  c.horizon = 4.0;
  c.steps = 40;
  c.paths = 120;
  c.seed = seed;
  c.threads = 1;
  return c;
}

}  // namespace

std::vector<CheckResult> validate_quantum() {
  std::vector<CheckResult> out;

  {
    ComplexMatrix sx = ComplexMatrix::Zero(2, 2);
    sx(0, 1) = 1.0;
    sx(1, 0) = 1.0;
    const EnergySpectrum spectrum = EnergySpectrum::from_dense(sx);
    ComplexMatrix minus(2, 2), plus(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    plus << 0.5, 0.5, 0.5, 0.5;
    const double err = std::max(
        {std::abs(spectrum.level(0) + 1.0), std::abs(spectrum.level(1) - 1.0),
         (spectrum.projector(0) - minus).norm(), (spectrum.projector(1) - plus).norm()});
    push(out, "quantum.symmetric_two_level_spectrum", err < 1e-12,
         "max deviation " + fmt(err) + " vs 1e-12");
  }

  ComplexMatrix h(4, 4);
  h << Complex(1.0, 0.0), Complex(0.2, 0.1), Complex(0.0, -0.3), Complex(0.4, 0.0),
      Complex(0.2, -0.1), Complex(-0.5, 0.0), Complex(0.1, 0.2), Complex(0.0, 0.0),
      Complex(0.0, 0.3), Complex(0.1, -0.2), Complex(2.0, 0.0), Complex(-0.1, 0.1),
      Complex(0.4, 0.0), Complex(0.0, 0.0), Complex(-0.1, -0.1), Complex(0.7, 0.0);
  const EnergySpectrum dense = EnergySpectrum::from_dense(h);

  {
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    double ortho = 0.0;
    for (int i = 0; i < dense.num_levels(); ++i) {
      sum += dense.projector(i);
      for (int j = 0; j < dense.num_levels(); ++j) {
        const ComplexMatrix prod = dense.projector(i) * dense.projector(j);
        ortho = std::max(ortho, i == j ? (prod - dense.projector(i)).norm()
                                       : prod.norm());
      }
    }
    const double identity_err = (sum - ComplexMatrix::Identity(4, 4)).norm();
    push(out, "quantum.projector_identity_resolution",
         identity_err < 1e-10 && ortho < 1e-10,
         "identity " + fmt(identity_err) + ", orthogonality " + fmt(ortho) +
             " vs 1e-10");
    const double rebuild = (dense.hamiltonian() - h).norm();
    push(out, "quantum.dense_hamiltonian_rebuild", rebuild < 1e-8,
         "Frobenius " + fmt(rebuild) + " vs 1e-8");
  }

  {
    const EnergySpectrum spectrum = two_level_spectrum(0.0, 1.0);
    const DensityMatrix rho = DensityMatrix::pure(start_state());
    const double mean = expectation_energy(rho, spectrum);
    const double var = variance_energy(rho, spectrum);
    const double third = third_central_moment(rho, spectrum);
    const std::vector<double> probs = level_probabilities(rho, spectrum);
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    // third central moment of levels {0, 1} under p = (0.3, 0.7): p q (q - p)
    const double third_exact = 0.7 * 0.3 * (0.3 - 0.7);
    push(out, "quantum.moment_consistency",
         std::abs(mean - 0.7) < 1e-12 && std::abs(var - 0.21) < 1e-12 &&
             std::abs(third - third_exact) < 1e-12 && std::abs(total - 1.0) < 1e-12,
         "mean " + fmt(mean) + ", var " + fmt(var) + ", third " + fmt(third) +
             ", total prob " + fmt(total));
  }

  {
    const EnergySpectrum spectrum = two_level_spectrum(0.0, 1.0);
    const DensityMatrix rho = DensityMatrix::pure(start_state());
    const DensityMatrix collapsed = luders_state(rho, spectrum, 1);
    const double mean_err = std::abs(expectation_energy(collapsed, spectrum) - 1.0);
    const double var = variance_energy(collapsed, spectrum);
    push(out, "quantum.projection_postulate", mean_err < 1e-10 && var < 1e-10,
         "energy error " + fmt(mean_err) + ", variance " + fmt(var) + " vs 1e-10");

    ComplexMatrix pure1 = ComplexMatrix::Zero(2, 2);
    pure1(1, 1) = 1.0;
    const bool zero_branch = raises<ZeroProbabilityBranch>(
        [&] { luders_state(DensityMatrix(pure1), spectrum, 0); });
    push(out, "quantum.zero_probability_branch_rejected", zero_branch,
         "projection onto an unoccupied level throws");
  }

  {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(1, 1) = 1.0;
    const double self_dist = trace_distance(DensityMatrix(a), DensityMatrix(a));
    const double ortho_dist = trace_distance(DensityMatrix(a), DensityMatrix(b));
    push(out, "quantum.trace_distance_limits",
         self_dist < 1e-14 && std::abs(ortho_dist - 1.0) < 1e-12,
         "self " + fmt(self_dist) + ", orthogonal " + fmt(ortho_dist));
  }

  {
    ComplexMatrix nearly = ComplexMatrix::Zero(3, 3);
    nearly(1, 1) = 1e-12;
    nearly(2, 2) = 1.0;
    const EnergySpectrum clustered = EnergySpectrum::from_dense(nearly);
    const double rank =
        clustered.num_levels() == 2 ? clustered.projector(0).trace().real() : 0.0;
    push(out, "quantum.degenerate_eigenvalue_clustering",
         clustered.num_levels() == 2 && std::abs(rank - 2.0) < 1e-12,
         std::to_string(clustered.num_levels()) + " levels, first rank " + fmt(rank));
  }

  {
    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    skew(1, 0) = -1.0;
    const bool non_hermitian =
        raises<NonHermitianInput>([&] { EnergySpectrum::from_dense(skew); });
    ComplexVector bad(2);
    bad << 1.0, 1.0;
    const bool bad_norm = raises<InvalidState>([&] { PureState wrong(bad); });
    ComplexMatrix off = ComplexMatrix::Identity(2, 2);
    const bool bad_trace = raises<InvalidState>([&] { DensityMatrix wrong(off); });
    push(out, "quantum.invalid_inputs_rejected",
         non_hermitian && bad_norm && bad_trace,
         "non-Hermitian, unnormalized, and trace-2 inputs all throw");
  }

  return out;
}

std::vector<CheckResult> validate_levy(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::vector<TestModel> models = test_models();

  for (const TestModel& tm : models) {
    PhiloxRng rng(seed, 0x100);
    const double dt = 0.1;
    const std::size_t n = 100000;
    std::vector<double> x(n);
    for (double& v : x) v = tm.model.sample_increment(dt, rng);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
      const double d = v - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double var = m2 / static_cast<double>(n - 1);
    m4 /= static_cast<double>(n);
    const double se_mean = std::sqrt(var / static_cast<double>(n));
    const double se_var =
        std::sqrt(std::max(m4 - var * var, 0.0) / static_cast<double>(n));
    const double mean_ref = tm.model.psi_prime(0.0) * dt;
    const double var_ref = tm.model.psi_double_prime(0.0) * dt;
    const bool mean_ok =
        std::abs(mean - mean_ref) < thresholds::kMeanSigma * se_mean;
    const bool var_ok = std::abs(var - var_ref) < thresholds::kMeanSigma * se_var;
    push(out, std::string("levy.increment_moments_") + tm.tag, mean_ok && var_ok,
         "mean " + fmt(mean) + " vs " + fmt(mean_ref) + " (se " + fmt(se_mean) +
             "), var " + fmt(var) + " vs " + fmt(var_ref) + " (se " + fmt(se_var) +
             "), z<4");
  }

  for (const TestModel& tm : models) {
    std::vector<double> alphas;
    const double sup = tm.model.domain_sup();
    for (double a : {-2.0, -1.0, -0.4, 0.3, 0.8, 1.5, 2.5})
      if (a < 0.9 * sup) alphas.push_back(a);
    bool convex = true;
    double margin = 1e300;
    for (std::size_t i = 0; i < alphas.size(); ++i)
      for (std::size_t j = i + 1; j < alphas.size(); ++j) {
        const double mid = 0.5 * (alphas[i] + alphas[j]);
        const double gap = 0.5 * tm.model.psi(alphas[i]) +
                           0.5 * tm.model.psi(alphas[j]) - tm.model.psi(mid);
        convex = convex && gap > 0.0;
        margin = std::min(margin, gap);
      }
    bool curvature = true;
    double worst = 0.0;
    const double h = 1e-4;
    for (double a : alphas) {
      const double num =
          (tm.model.psi(a + h) - 2.0 * tm.model.psi(a) + tm.model.psi(a - h)) /
          (h * h);
      const double exact = tm.model.psi_double_prime(a);
      const double rel = std::abs(num - exact) / std::max(std::abs(exact), 1e-12);
      worst = std::max(worst, rel);
      curvature = curvature && rel < 1e-5;
    }
    push(out, std::string("levy.exponent_convexity_") + tm.tag, convex && curvature,
         "min midpoint gap " + fmt(margin) + " > 0, curvature rel err " +
             fmt(worst) + " vs 1e-5");
  }

  for (const TestModel& tm : models) {
    const double sup = tm.model.domain_sup();
    std::vector<double> alphas;
    for (double a : {-1.0, 0.3, 0.8, 1.5})
      if (a < 0.85 * sup && a != 0.0) alphas.push_back(a);
    bool ok = true;
    double worst = 0.0;
    for (double a : alphas) {
      const double lk = levy_khintchine_value(tm.model, a);
      const double exact = tm.model.psi(a);
      const double rel = std::abs(lk - exact) / std::max(std::abs(exact), 1e-12);
      worst = std::max(worst, rel);
      ok = ok && rel < 1e-8;
    }
    push(out, std::string("levy.triplet_reproduces_exponent_") + tm.tag, ok,
         "worst relative deviation " + fmt(worst) + " vs 1e-8");
  }

  for (const TestModel& tm : models) {
    PhiloxRng rng(seed, 0x200);
    const std::size_t n = 10000;
    std::vector<double> one(n), two(n);
    for (std::size_t i = 0; i < n; ++i) one[i] = tm.model.sample_increment(0.8, rng);
    for (std::size_t i = 0; i < n; ++i)
      two[i] = tm.model.sample_increment(0.4, rng) + tm.model.sample_increment(0.4, rng);
    const double p = ks_two_sample_pvalue(one, two);
    push(out, std::string("levy.increment_additivity_") + tm.tag,
         p > thresholds::kDistributionP,
         "KS p = " + fmt(p) + " vs " + fmt(thresholds::kDistributionP));
  }

  for (const TestModel& tm : models) {
    PhiloxRng rng(seed, 0x300);
    bool ok = true;
    std::string detail;
    for (double t : {0.25, 0.5, 0.75, 1.0, 1.25}) {
      const std::size_t n = 20000;
      RunningMoments lam;
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = tm.model.sample_increment(t, rng);
        lam.add(exponential_martingale(tm.model, tm.kappa_mgf, xi, t));
      }
      const double se = lam.standard_error();
      const bool point_ok =
          std::abs(lam.mean() - 1.0) < thresholds::kMeanSigma * se;
      ok = ok && point_ok;
      if (t == 1.0)
        detail = "mean at t=1: " + fmt(lam.mean()) + " (se " + fmt(se) + "), z<4";
    }
    push(out, std::string("levy.exponential_martingale_mean_") + tm.tag, ok, detail);
  }

  for (const TestModel& tm : models) {
    const LevyModel same = tm.model.esscher_tilt(0.0);
    const LevyModel tilted = tm.model.esscher_tilt(tm.kappa_mgf);
    double worst = 0.0;
    for (double a : {-1.0, -0.3, 0.2}) {
      if (!tilted.in_domain(a) || !tm.model.in_domain(a + tm.kappa_mgf)) continue;
      worst = std::max(worst, std::abs(same.psi(a) - tm.model.psi(a)));
      worst = std::max(
          worst, std::abs(tilted.psi(a) -
                          (tm.model.psi(a + tm.kappa_mgf) - tm.model.psi(tm.kappa_mgf))));
    }
    push(out, std::string("levy.exponential_tilt_identity_") + tm.tag, worst < 1e-10,
         "worst exponent deviation " + fmt(worst) + " vs 1e-10");
  }

  {
    PhiloxRng rng(seed, 0x400);
    bool ok = true;
    for (const TestModel& tm : models) {
      if (!tm.model.monotone_paths()) continue;
      for (int i = 0; i < 10000; ++i)
        ok = ok && tm.model.sample_increment(0.05, rng) >= 0.0;
    }
    push(out, "levy.monotone_jump_increments", ok,
         "10^4 increments per jump kind, all nonnegative");
  }

  {
    const LevyModel poisson = LevyModel::poisson(1.0);
    const double b1 = cantelli_bound(poisson, 0.7, 0.1, 1.0);
    const double b25 = cantelli_bound(poisson, 0.7, 0.1, 25.0);
    const bool ok = b1 == 1.0 && b25 > 0.0 && b25 < 1.0 && b25 < b1;
    push(out, "levy.tail_bound_regimes", ok,
         "uninformative regime " + fmt(b1) + ", informative " + fmt(b25) +
             ", decreasing");
  }

  {
    const LevyModel gamma = LevyModel::gamma(1.0, 1.0);
    const LevyModel cpe = LevyModel::compound_poisson_exp(1.0, 2.0);
    const bool ok = raises<OutsideExponentDomain>([&] { gamma.psi(1.0); }) &&
                    raises<OutsideExponentDomain>([&] { cpe.psi(2.5); }) &&
                    raises<OutsideExponentDomain>([&] { gamma.esscher_tilt(1.2); });
    push(out, "levy.domain_boundary_rejected", ok,
         "exponent and tilt evaluations at or past the domain edge throw");
  }

  return out;
}

std::vector<CheckResult> validate_information(std::uint64_t seed) {
  std::vector<CheckResult> out;

  {
    PhiloxRng rng(seed, 0x500);
    const Signal signal = start_signal(0.0, 1.0);
    std::vector<std::size_t> counts(2, 0);
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i)
      ++counts[static_cast<std::size_t>(sample_outcome(signal, rng))];
    const std::vector<double> probs = {0.3, 0.7};
    const double p = chi_squared_uniformity_pvalue(counts, probs);
    push(out, "information.outcome_prior_frequencies",
         p > thresholds::kDistributionP,
         "chi-squared p = " + fmt(p) + " over " + std::to_string(n) + " draws");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    PhiloxRng rng(seed, 0x600);
    const Signal signal = start_signal(sc.e1, sc.e2);
    const std::vector<double> grid = make_grid(5.0, 100);
    RunningMoments inc;
    for (int path = 0; path < 200; ++path) {
      const InformationPath xi = sample_information_path(sc.model, signal, 1, grid, rng);
      for (std::size_t i = 1; i < xi.values.size(); ++i)
        inc.add(xi.values[i] - xi.values[i - 1]);
    }
    const double dt = grid[1] - grid[0];
    const double ref = sc.model.esscher_tilt(signal.coupling(1)).psi_prime(0.0) * dt;
    const double se = inc.standard_error();
    push(out, std::string("information.conditional_drift_") + sc.tag,
         std::abs(inc.mean() - ref) < thresholds::kMeanSigma * se,
         "mean increment " + fmt(inc.mean()) + " vs " + fmt(ref) + " (se " +
             fmt(se) + "), z<4");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    const double coupling = sc.e2;  // lambda = 1
    const LevyModel tilted = sc.model.esscher_tilt(coupling);
    std::vector<double> alphas = {-1.0};
    const double headroom = sc.model.domain_sup();
    for (double a : {0.8, 0.4, 0.2})
      if (2.0 * a + coupling < 0.95 * headroom) {
        alphas.push_back(a);
        break;
      }
    PhiloxRng rng(seed, 0x700);
    bool ok = true;
    std::string detail;
    const double t = 0.2;
    for (double a : alphas) {
      const std::size_t n = 100000;
      RunningMoments mgf;
      for (std::size_t i = 0; i < n; ++i)
        mgf.add(std::exp(a * tilted.sample_increment(t, rng)));
      const double observed = std::log(mgf.mean()) / t;
      const double ref = conditional_exponent(sc.model, coupling, a);
      const double se = mgf.standard_error() / (mgf.mean() * t);
      ok = ok && std::abs(observed - ref) < thresholds::kMeanSigma * se;
      detail = "alpha " + fmt(a) + ": " + fmt(observed) + " vs " + fmt(ref) +
               " (se " + fmt(se) + "), z<4";
    }
    push(out, std::string("information.conditional_exponent_") + sc.tag, ok, detail);
  }

  {
    PhiloxRng rng(seed, 0x800);
    const LevyModel model = LevyModel::poisson(1.0);
    const Signal uncoupled({0.0, 1.0}, {0.3, 0.7}, 0.0);
    const std::vector<double> grid = make_grid(5.0, 10);
    std::vector<double> conditional, base;
    for (int path = 0; path < 500; ++path) {
      const InformationPath xi = sample_information_path(model, uncoupled, 1, grid, rng);
      for (std::size_t i = 1; i < xi.values.size(); ++i)
        conditional.push_back(xi.values[i] - xi.values[i - 1]);
    }
    for (std::size_t i = 0; i < conditional.size(); ++i)
      base.push_back(model.sample_increment(0.5, rng));
    const double p = ks_two_sample_pvalue(conditional, base);
    push(out, "information.zero_coupling_reduces_to_base",
         p > thresholds::kDistributionP, "KS p = " + fmt(p));
  }

  {
    PhiloxRng rng(seed, 0x900);
    bool ok = true;
    for (const TwoLevelScenario& sc : two_level_scenarios()) {
      if (!sc.model.monotone_paths()) continue;
      const Signal signal = start_signal(sc.e1, sc.e2);
      const std::vector<double> grid = make_grid(3.0, 60);
      for (int path = 0; path < 50; ++path) {
        const InformationPath xi = sample_information_path(sc.model, signal, 0, grid, rng);
        for (std::size_t i = 1; i < xi.values.size(); ++i)
          ok = ok && xi.values[i] >= xi.values[i - 1];
      }
    }
    push(out, "information.monotone_conditional_paths", ok,
         "jump-kind conditional paths are nondecreasing");
  }

  {
    PhiloxRng rng(seed, 0xa00);
    const LevyModel model = LevyModel::brownian(0.0, 1.0);
    const Signal signal = start_signal(0.0, 1.0);
    const std::vector<double> grid = make_grid(1.0, 100);
    const int n_paths = 3000;
    std::vector<double> finals;
    finals.reserve(static_cast<std::size_t>(n_paths));
    RunningMoments w_mean;
    for (int p = 0; p < n_paths; ++p) {
      const int outcome = sample_outcome(signal, rng);
      const InformationPath xi = sample_information_path(model, signal, outcome, grid, rng);
      std::vector<double> h(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::vector<double> pi =
            posterior_probabilities(model, signal, xi.values[i], grid[i]);
        h[i] = pi[0] * 0.0 + pi[1] * 1.0;
      }
      const std::vector<double> w = innovations_path(model, xi, h, signal.lambda());
      finals.push_back(w.back());
      w_mean.add(w.back());
    }
    double m2 = 0.0;
    for (double v : finals) m2 += (v - w_mean.mean()) * (v - w_mean.mean());
    const double var = m2 / static_cast<double>(n_paths - 1);
    const double se_var = std::sqrt(2.0 / static_cast<double>(n_paths - 1));
    std::vector<double> reference(finals.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : reference) v = normal(rng);
    const double ks = ks_two_sample_pvalue(finals, reference);
    const bool ok =
        std::abs(w_mean.mean()) < thresholds::kMeanSigma * w_mean.standard_error() &&
        std::abs(var - 1.0) < thresholds::kMeanSigma * se_var &&
        ks > thresholds::kDistributionP;
    push(out, "information.innovations_standard_brownian", ok,
         "mean " + fmt(w_mean.mean()) + " (se " + fmt(w_mean.standard_error()) +
             "), var " + fmt(var) + " (se " + fmt(se_var) + "), KS p = " + fmt(ks));
  }

  {
    PhiloxRng rng(seed, 0xb00);
    const LevyModel model = LevyModel::brownian(0.0, 1.0);
    const Signal signal = start_signal(0.0, 1.0);
    const double horizon = 1e4;
    const double sigma = signal.lambda();
    const double tol = 4.0 / (sigma * std::sqrt(horizon));
    int within = 0;
    const int n_paths = 600;
    for (int p = 0; p < n_paths; ++p) {
      const int outcome = sample_outcome(signal, rng);
      const LevyModel tilted = model.esscher_tilt(signal.coupling(outcome));
      const double xi = tilted.sample_increment(horizon, rng);
      if (std::abs(xi / (sigma * horizon) - signal.energy(outcome)) < tol) ++within;
    }
    const double fraction = static_cast<double>(within) / n_paths;
    push(out, "information.long_run_identification", fraction >= 0.99,
         fmt(fraction * 100.0) + "% of paths identify the level within 4/(sigma sqrt(T))");
  }

  {
    const LevyModel model = LevyModel::brownian(0.0, 1.0);
    const Signal signal = start_signal(0.0, 1.0);
    PhiloxRng rng(7, 7);
    const bool bad_front = raises<BadGrid>([&] {
      const std::vector<double> grid = {0.5, 1.0};
      sample_information_path(model, signal, 0, grid, rng);
    });
    const bool not_increasing = raises<BadGrid>([&] {
      const std::vector<double> grid = {0.0, 1.0, 1.0};
      sample_information_path(model, signal, 0, grid, rng);
    });
    const bool too_short = raises<BadGrid>([&] {
      const std::vector<double> grid = {0.0};
      sample_information_path(model, signal, 0, grid, rng);
    });
    push(out, "information.grid_validation", bad_front && not_increasing && too_short,
         "nonzero origin, stalled grid, and single-point grid all throw");
  }

  {
    InformationPath path;
    path.times = {0.0, 0.5, 1.0};
    path.values = {0.0, 0.2, 0.5};
    const std::vector<double> h = {0.7, 0.7, 0.7};
    const bool wrong_kind = raises<WrongNoiseKind>(
        [&] { innovations_path(LevyModel::poisson(1.0), path, h, 1.0); });
    const bool domain = raises<OutsideExponentDomain>([&] {
      Signal({0.0, 2.0}, {0.3, 0.7}, 1.0).validate_against(LevyModel::gamma(1.0, 1.0));
    });
    push(out, "information.model_compatibility_enforced", wrong_kind && domain,
         "innovations demand Brownian noise; couplings must stay inside the domain");
  }

  return out;
}

std::vector<CheckResult> validate_reduction(std::uint64_t seed) {
  std::vector<CheckResult> out;

  {
    PhiloxRng rng(seed, 0xc00);
    double worst = 0.0;
    bool in_range = true;
    for (const TwoLevelScenario& sc : two_level_scenarios()) {
      const Signal signal = start_signal(sc.e1, sc.e2);
      for (int i = 0; i < 200; ++i) {
        const double t = 3.0;
        const double xi = sc.model.sample_increment(t, rng);
        const std::vector<double> pi =
            posterior_probabilities(sc.model, signal, xi, t);
        const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
        worst = std::max(worst, std::abs(total - 1.0));
        for (double v : pi) in_range = in_range && v >= 0.0 && v <= 1.0 + 1e-15;
      }
    }
    push(out, "reduction.posterior_normalization", worst < 1e-12 && in_range,
         "worst |sum - 1| = " + fmt(worst) + " vs 1e-12");
  }

  {
    const LevyModel model = LevyModel::brownian(0.0, 1.0);
    const Signal signal({0.0, 1000.0}, {0.3, 0.7}, 10.0);
    double worst = 0.0;
    bool finite = true;
    for (double xi : {-1.2, 1.2}) {
      const std::vector<double> pi = posterior_probabilities(model, signal, xi, 1.0);
      const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
      worst = std::max(worst, std::abs(total - 1.0));
      for (double v : pi) finite = finite && std::isfinite(v);
    }
    push(out, "reduction.log_space_stress", worst < 1e-12 && finite,
         "couplings of size 10^4: |sum - 1| = " + fmt(worst) + ", all finite");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    PhiloxRng rng(seed, 0xd00);
    const Signal signal = start_signal(sc.e1, sc.e2);
    const double t = 2.0;
    RunningMoments pi2;
    for (int p = 0; p < 10000; ++p) {
      const int outcome = sample_outcome(signal, rng);
      const LevyModel tilted = sc.model.esscher_tilt(signal.coupling(outcome));
      const double xi = tilted.sample_increment(t, rng);
      pi2.add(posterior_probabilities(sc.model, signal, xi, t)[1]);
    }
    const double se = pi2.standard_error();
    push(out, std::string("reduction.posterior_martingale_") + sc.tag,
         std::abs(pi2.mean() - 0.7) < thresholds::kMeanSigma * se,
         "mean posterior " + fmt(pi2.mean()) + " vs 0.7 (se " + fmt(se) + "), z<4");
  }

  {
    bool ok = true;
    std::string detail;
    for (const TwoLevelScenario& sc : two_level_scenarios()) {
      const Signal signal = start_signal(sc.e1, sc.e2);
      const EnergySpectrum spectrum = two_level_spectrum(sc.e1, sc.e2);
      const DensityMatrix rho0 = DensityMatrix::pure(start_state());
      const double xi = 0.8, t = 1.3;
      const std::vector<double> pi =
          posterior_probabilities(sc.model, signal, xi, t);
      const DensityMatrix rho = evolve_density(sc.model, signal, rho0, spectrum, xi, t);
      const double diag_err =
          std::max(std::abs(rho.matrix()(0, 0).real() - pi[0]),
                   std::abs(rho.matrix()(1, 1).real() - pi[1]));
      const double coh_err =
          std::abs(std::abs(rho.matrix()(0, 1)) - std::sqrt(pi[0] * pi[1]));
      const double gap = sc.e1 - sc.e2;
      const double phase_err = std::abs(std::remainder(
          std::arg(rho.matrix()(0, 1)) - (-gap * t), 2.0 * 3.141592653589793));
      const double purity_err = std::abs(rho.purity() - 1.0);
      ok = ok && diag_err < 1e-12 && coh_err < 1e-12 && phase_err < 1e-10 &&
           purity_err < 1e-10;
      if (sc.tag == std::string("brownian"))
        detail = "diag " + fmt(diag_err) + ", coherence " + fmt(coh_err) +
                 ", phase " + fmt(phase_err) + ", purity " + fmt(purity_err);
    }
    push(out, "reduction.closed_form_density_consistency", ok, detail);
  }

  {
    bool ok = true;
    double worst = 0.0;
    for (const TwoLevelScenario& sc : two_level_scenarios()) {
      const Signal signal = start_signal(sc.e1, sc.e2);
      const EnergySpectrum spectrum = two_level_spectrum(sc.e1, sc.e2);
      const PureState psi0 = start_state();
      const double xi = 0.7, t = 1.3;
      const PureState psi = evolve_state_vector(sc.model, signal, psi0, spectrum, xi, t);
      const ComplexMatrix outer = psi.vector() * psi.vector().adjoint();
      const DensityMatrix rho =
          evolve_density(sc.model, signal, DensityMatrix::pure(psi0), spectrum, xi, t);
      worst = std::max(worst, (outer - rho.matrix()).norm());
      ok = ok && worst < 1e-12;
    }
    push(out, "reduction.state_vector_matches_density", ok,
         "worst Frobenius gap " + fmt(worst) + " vs 1e-12");
  }

  {
    PhiloxRng rng(seed, 0xe00);
    const EnergySpectrum spectrum = two_level_spectrum(0.0, 1.0);
    ComplexVector eigen(2);
    eigen << 0.0, 1.0;
    const std::vector<double> grid = make_grid(1.0, 200);
    std::vector<double> dw(grid.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < dw.size(); ++i)
      dw[i] = normal(rng) * std::sqrt(grid[i + 1] - grid[i]);
    const std::vector<ComplexVector> series =
        euler_maruyama_vector(spectrum, eigen, 0.8, grid, dw);
    const double overlap = std::abs(series.back()(1));
    push(out, "reduction.eigenstate_stationary_under_sde",
         std::abs(overlap - 1.0) < 1e-9,
         "final overlap with the eigenstate " + fmt(overlap));
  }

  {
    const EnergySpectrum spectrum = two_level_spectrum(0.0, 1.0);
    const ComplexVector psi0 = start_state().vector();
    const std::vector<double> grid = make_grid(1.0, 1000);
    const std::vector<double> dw(grid.size() - 1, 0.0);
    const std::vector<ComplexVector> series =
        euler_maruyama_vector(spectrum, psi0, 0.0, grid, dw);
    ComplexVector exact(2);
    exact << psi0(0), psi0(1) * std::exp(Complex(0.0, -1.0 * grid.back()));
    const double err = (series.back() - exact).norm();
    push(out, "reduction.deterministic_phase_accuracy", err < 1e-3,
         "Euler phase error " + fmt(err) + " vs 1e-3 at dt = 1e-3");
  }

  {
    PhiloxRng rng(seed, 0xf00);
    const LevyModel model = LevyModel::brownian(0.0, 1.0);
    const Signal signal = start_signal(0.0, 1.0);
    const EnergySpectrum spectrum = two_level_spectrum(0.0, 1.0);
    const std::vector<double> grid = make_grid(2.0, 4000);
    const int outcome = sample_outcome(signal, rng);
    const InformationPath xi = sample_information_path(model, signal, outcome, grid, rng);
    std::vector<double> closed(grid.size()), h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::vector<double> pi =
          posterior_probabilities(model, signal, xi.values[i], grid[i]);
      closed[i] = pi[1];
      h[i] = pi[1];  // energies are (0, 1)
    }
    const std::vector<double> w = innovations_path(model, xi, h, signal.lambda());
    std::vector<double> dw(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) dw[i] = w[i + 1] - w[i];
    const std::vector<ComplexVector> em =
        euler_maruyama_vector(spectrum, start_state().vector(), signal.lambda(), grid, dw);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      sup = std::max(sup, std::abs(std::norm(em[i](1)) - closed[i]));
    push(out, "reduction.sde_tracks_closed_form", sup < 0.05,
         "sup posterior deviation " + fmt(sup) + " vs 0.05 at dt = 5e-4");

    const std::vector<ComplexMatrix> em_rho = euler_maruyama_density(
        spectrum, start_state().vector() * start_state().vector().adjoint(),
        signal.lambda(), grid, dw);
    const ComplexMatrix outer = em[em.size() - 1] * em[em.size() - 1].adjoint();
    const double gap = (em_rho.back() - outer).norm();
    push(out, "reduction.sde_density_matches_vector", gap < 0.05,
         "final Frobenius gap " + fmt(gap) + " vs 0.05 (same driving noise)");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    PhiloxRng rng(seed, 0x1000);
    const Signal signal = start_signal(sc.e1, sc.e2);
    const double gamma = gamma_rate(sc.model, 1.0, sc.e1, sc.e2);
    const double horizon = std::log(100.0) / gamma;
    const double v0 = 0.3 * 0.7 * (sc.e2 - sc.e1) * (sc.e2 - sc.e1);
    RunningMoments v;
    for (int p = 0; p < 3000; ++p) {
      const int outcome = sample_outcome(signal, rng);
      const LevyModel tilted = sc.model.esscher_tilt(signal.coupling(outcome));
      const double xi = tilted.sample_increment(horizon, rng);
      const std::vector<double> pi =
          posterior_probabilities(sc.model, signal, xi, horizon);
      const double mean = pi[0] * sc.e1 + pi[1] * sc.e2;
      v.add(pi[0] * sc.e1 * sc.e1 + pi[1] * sc.e2 * sc.e2 - mean * mean);
    }
    push(out, std::string("reduction.variance_contraction_") + sc.tag,
         v.mean() < 0.05 * v0,
         "E[V_T]/V_0 = " + fmt(v.mean() / v0) + " vs 0.05 at T = ln(100)/Gamma");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    PhiloxRng rng(seed, 0x1100);
    const Signal signal = start_signal(sc.e1, sc.e2);
    const EnergySpectrum spectrum = two_level_spectrum(sc.e1, sc.e2);
    const DensityMatrix rho0 = DensityMatrix::pure(start_state());
    const double gamma = gamma_rate(sc.model, 1.0, sc.e1, sc.e2);
    const double horizon = 25.0 / gamma;
    const double delta = 1e-6;
    int collapsed = 0;
    double worst = 0.0;
    for (int p = 0; p < 500; ++p) {
      const int outcome = sample_outcome(signal, rng);
      const LevyModel tilted = sc.model.esscher_tilt(signal.coupling(outcome));
      const double xi = tilted.sample_increment(horizon, rng);
      const std::vector<double> pi =
          posterior_probabilities(sc.model, signal, xi, horizon);
      const std::optional<int> hit = detect_collapse(pi, delta);
      if (!hit) continue;
      ++collapsed;
      const DensityMatrix rho =
          evolve_density(sc.model, signal, rho0, spectrum, xi, horizon);
      worst = std::max(
          worst, trace_distance(rho, luders_state(rho0, spectrum, *hit)));
    }
    const double fraction = collapsed / 500.0;
    push(out, std::string("reduction.luders_limit_") + sc.tag,
         fraction >= 0.99 && worst <= 10.0 * delta,
         fmt(fraction * 100.0) + "% collapsed; worst trace distance " + fmt(worst) +
             " vs " + fmt(10.0 * delta));
  }

  {
    PhiloxRng rng(seed, 0x1200);
    bool pure_ok = true;
    double worst = 0.0;
    for (const TwoLevelScenario& sc : two_level_scenarios()) {
      const Signal signal = start_signal(sc.e1, sc.e2);
      const EnergySpectrum spectrum = two_level_spectrum(sc.e1, sc.e2);
      const DensityMatrix rho0 = DensityMatrix::pure(start_state());
      for (double t : {0.5, 2.0, 8.0}) {
        const double xi = sc.model.sample_increment(t, rng);
        const DensityMatrix rho =
            evolve_density(sc.model, signal, rho0, spectrum, xi, t);
        worst = std::max(worst, std::abs(rho.purity() - 1.0));
      }
    }
    pure_ok = worst < 1e-10;
    push(out, "reduction.purity_preservation", pure_ok,
         "worst |tr rho^2 - 1| = " + fmt(worst) + " vs 1e-10");
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    PhiloxRng rng(seed, 0x1300);
    const Signal signal = start_signal(sc.e1, sc.e2);
    const double eps = 0.1;
    const double gamma = gamma_rate(sc.model, 1.0, sc.e1, sc.e2);
    const double horizon = 10.0 / gamma;
    const int n_paths = 10000;
    int below = 0;
    // True outcome fixed at level 2; failure means pi_2 < 1 - eps.
    const double kappa = signal.coupling(0) - signal.coupling(1);
    const LevyModel conditional = sc.model.esscher_tilt(signal.coupling(1));
    const double threshold = (0.7 / 0.3) * eps / (1.0 - eps);
    const double bound = cantelli_bound(conditional, kappa, threshold, horizon);
    for (int p = 0; p < n_paths; ++p) {
      const double xi = conditional.sample_increment(horizon, rng);
      const std::vector<double> pi =
          posterior_probabilities(sc.model, signal, xi, horizon);
      if (pi[1] < 1.0 - eps) ++below;
    }
    const double rate = static_cast<double>(below) / n_paths;
    const double se = std::sqrt(std::max(rate * (1.0 - rate), 1e-12) / n_paths);
    push(out, std::string("reduction.conditional_convergence_") + sc.tag,
         rate <= bound + thresholds::kBoundSigma * se,
         "P(pi < 1 - eps) = " + fmt(rate) + " vs bound " + fmt(bound) + " + 3 se (" +
             fmt(se) + ")");
  }

  {
    const std::vector<double> sharp = {1.0 - 1e-7, 1e-7};
    const std::vector<double> soft = {0.6, 0.4};
    const std::optional<int> hit = detect_collapse(sharp, 1e-6);
    const std::optional<int> miss = detect_collapse(soft, 1e-6);
    const bool throws_on_half = raises<std::invalid_argument>(
        [&] { detect_collapse(soft, 0.5); });
    push(out, "reduction.collapse_detection",
         hit.has_value() && *hit == 0 && !miss.has_value() && throws_on_half,
         "threshold crossing detected, ambiguous state not, delta = 0.5 rejected");
  }

  return out;
}

std::vector<CheckResult> validate_decoherence(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::vector<TestModel> models = test_models();

  for (const TestModel& tm : models) {
    const double sup = tm.model.domain_sup();
    std::vector<double> lambdas = {0.3, 0.7};
    std::vector<double> energies = {0.0, 0.2, 0.45};
    bool agree = true, signs = true;
    double worst = 0.0;
    for (double lambda : lambdas)
      for (double em : energies)
        for (double en : energies) {
          if (lambda * std::max(em, en) >= 0.6 * sup) continue;
          const double exact = gamma_rate(tm.model, lambda, em, en);
          if (em == en) {
            signs = signs && exact == 0.0;
            continue;
          }
          signs = signs && exact > 0.0;
          const double integral = gamma_rate_integral(tm.model, lambda, em, en);
          const double sinh_form = gamma_rate_sinh(tm.model, lambda, em, en);
          const double rel =
              std::max(std::abs(integral - exact), std::abs(sinh_form - exact)) /
              std::max(std::abs(exact), 1e-300);
          worst = std::max(worst, rel);
          agree = agree && rel < 1e-6;
        }
    push(out, std::string("decoherence.rate_forms_agree_") + tm.tag, agree && signs,
         "worst pairwise relative gap " + fmt(worst) +
             " vs 1e-6; zero iff equal energies");
  }

  for (const TestModel& tm : models) {
    const double lambda = 1.0;
    const double mid = 0.4, gap = 1e-3;
    if (lambda * (mid + gap) >= tm.model.domain_sup()) continue;
    const double exact = gamma_rate(tm.model, lambda, mid - 0.5 * gap, mid + 0.5 * gap);
    const double approx = small_gap_approx(tm.model, lambda, mid - 0.5 * gap, mid + 0.5 * gap);
    const double rel = std::abs(exact / approx - 1.0);
    push(out, std::string("decoherence.small_gap_curvature_") + tm.tag, rel < 1e-4,
         "rate/approximation - 1 = " + fmt(rel) + " at gap 1e-3");
  }

  {
    bool increasing = true;
    const LevyModel poisson = LevyModel::poisson(1.0);
    double prev = 0.0;
    for (double shift : {0.0, 1.0, 2.0}) {
      const double g = gamma_rate(poisson, 1.0, shift, shift + 0.01);
      increasing = increasing && (shift == 0.0 || g > prev);
      prev = g;
    }
    // Exactly representable gap so shift invariance can hold bitwise.
    const LevyModel brown = LevyModel::brownian(0.0, 1.0);
    const double g0 = gamma_rate(brown, 1.0, 0.0, 0.25);
    const double g4 = gamma_rate(brown, 1.0, 4.0, 4.25);
    push(out, "decoherence.energy_scale_amplification",
         increasing && g0 == g4,
         "Poisson rate grows under spectral shift; Brownian rate " + fmt(g0) +
             " exactly invariant");
  }

  for (const TestModel& tm : models) {
    const double e1 = 0.0;
    const double e2 = tm.model.domain_sup() < 2.0 ? 0.45 : 1.0;
    const EnergySpectrum spectrum = two_level_spectrum(e1, e2);
    const DensityMatrix rho0 = DensityMatrix::pure(start_state());
    const double gamma = gamma_rate(tm.model, 1.0, e1, e2);
    bool ok = true;
    double worst = 0.0;
    for (double t : {0.5, 2.0}) {
      const DensityMatrix mu = mean_density(rho0, spectrum, tm.model, 1.0, t);
      const double trace_err = std::abs(mu.matrix().trace().real() - 1.0);
      const double herm = (mu.matrix() - mu.matrix().adjoint()).norm();
      const double diag = std::abs(mu.matrix()(1, 1).real() - 0.7);
      const Complex expected = rho0.matrix()(0, 1) * std::exp(-gamma * t) *
                               std::exp(Complex(0.0, -(e1 - e2) * t));
      const double off = std::abs(mu.matrix()(0, 1) - expected);
      worst = std::max({worst, trace_err, herm, diag, off});
    }
    const double at_zero =
        (mean_density(rho0, spectrum, tm.model, 1.0, 0.0).matrix() - rho0.matrix())
            .norm();
    worst = std::max(worst, at_zero);
    ok = worst < 1e-12;
    push(out, std::string("decoherence.mean_state_structure_") + tm.tag, ok,
         "worst deviation " + fmt(worst) +
             " vs 1e-12 (trace, Hermiticity, frozen diagonal, damped off-diagonal, t=0)");
  }

  for (const TestModel& tm : models) {
    const double e1 = 0.0;
    const double e2 = tm.model.domain_sup() < 2.0 ? 0.45 : 1.0;
    const EnergySpectrum spectrum = two_level_spectrum(e1, e2);
    const DensityMatrix rho0 = DensityMatrix::pure(start_state());

    const ComplexMatrix rhs = lindblad_rhs(rho0.matrix(), spectrum, tm.model, 1.0);
    const double trace_rhs = std::abs(rhs.trace());
    const double herm_rhs = (rhs - rhs.adjoint()).norm();

    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    const double fixes_diag = lindblad_rhs(diag, spectrum, tm.model, 1.0).norm();

    const ComplexMatrix integrated =
        integrate_lindblad(rho0, spectrum, tm.model, 1.0, 1.0, 400);
    const double gap =
        (integrated - mean_density(rho0, spectrum, tm.model, 1.0, 1.0).matrix()).norm();

    push(out, std::string("decoherence.generator_consistency_") + tm.tag,
         trace_rhs < 1e-10 && herm_rhs < 1e-10 && fixes_diag < 1e-9 && gap < 1e-6,
         "trace " + fmt(trace_rhs) + ", Hermiticity " + fmt(herm_rhs) +
             ", diagonal fixed point " + fmt(fixes_diag) + ", flow vs analytic " +
             fmt(gap) + " vs 1e-6");
  }

  {
    const double bound = clock_bound(3.801e-5, 1.0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", bound);
    const bool ok = std::string(buf) == "5.537e+21" && kPlanckSigmaSquared < bound;
    push(out, "decoherence.laboratory_clock_bound", ok,
         std::string("bound ") + buf +
             " MeV^-2 s^-1; proposed 2.8 MeV^-2 s^-1 within bound");
  }

  {
    const EnergySpectrum spectrum =
        EnergySpectrum({0.0, 0.3, 0.5},
                       {[] {
                          ComplexMatrix p = ComplexMatrix::Zero(3, 3);
                          p(0, 0) = 1.0;
                          return p;
                        }(),
                        [] {
                          ComplexMatrix p = ComplexMatrix::Zero(3, 3);
                          p(1, 1) = 1.0;
                          return p;
                        }(),
                        [] {
                          ComplexMatrix p = ComplexMatrix::Zero(3, 3);
                          p(2, 2) = 1.0;
                          return p;
                        }()});
    const LevyModel model = LevyModel::poisson(1.0);
    const std::vector<DecoherencePair> table = decoherence_table(spectrum, model, 1.0);
    double min_seen = 1e300;
    bool rows_ok = table.size() == 3;
    for (const DecoherencePair& row : table) {
      min_seen = std::min(min_seen, row.gamma);
      rows_ok = rows_ok && row.m < row.n && row.gamma > 0.0 &&
                std::abs(row.q_eff - effective_q(model, 1.0, row.e_m, row.e_n)) < 1e-14;
    }
    const double min_rate = min_gamma_rate(spectrum, model, 1.0);
    push(out, "decoherence.pair_table", rows_ok && min_rate == min_seen,
         std::to_string(table.size()) + " pairs; min rate " + fmt(min_rate));
  }

  for (const TwoLevelScenario& sc : two_level_scenarios()) {
    const double rate = gamma_rate(sc.model, 1.0, sc.e1, sc.e2);
    const ScenarioConfig config =
        two_level_config(sc, seed ^ 0x6c6c6eull, 2.0 / rate, 100, 20000);
    const EnsembleResult result = run_ensemble(config);
    const TestReport report = mean_density_test(config, result);
    double worst = 0.0;
    for (const CheckLine& line : report.lines)
      if (line.tolerance > 0.0)
        worst = std::max(worst, line.observed / line.tolerance);
    push(out, std::string("decoherence.lln_mean_density_") + sc.tag, report.passed,
         "20000-path mean state vs analytic: worst distance/tolerance ratio " +
             fmt(worst) + " over the bootstrapped checkpoints");
  }

  return out;
}

std::vector<CheckResult> validate_harness(std::uint64_t seed) {
  std::vector<CheckResult> out;

  {
    ScenarioConfig base = small_brownian_config(seed);
    ScenarioConfig threaded = base;
    threaded.threads = 3;
    const EnsembleResult a = run_ensemble(base);
    const EnsembleResult b = run_ensemble(threaded);
    bool identical = a.coherences == b.coherences && a.mean_energy == b.mean_energy &&
                     a.se_variance == b.se_variance;
    for (std::size_t i = 0; identical && i < a.mean_density.size(); ++i)
      identical = (a.mean_density[i] - b.mean_density[i]).norm() == 0.0;
    push(out, "harness.thread_count_invariance", identical,
         "1-thread and 3-thread ensembles agree bit for bit");

    const EnsembleResult again = run_ensemble(base);
    push(out, "harness.rerun_determinism",
         ensemble_series_csv(a) == ensemble_series_csv(again) &&
             outcomes_csv(a) == outcomes_csv(again),
         "identical artifacts on repeated runs");

    const SimulatedPath p0 = simulate_path(base, 0);
    const SimulatedPath p0_again = simulate_path(base, 0);
    const SimulatedPath p1 = simulate_path(base, 1);
    push(out, "harness.path_stream_determinism",
         p0.xi == p0_again.xi && p0.xi != p1.xi,
         "path 0 reproducible; paths 0 and 1 independent");

    const std::string series = path_series_csv(p0);
    const std::string ens = ensemble_series_csv(a);
    const std::string ck = checkpoints_csv(a);
    const std::string outc = outcomes_csv(a);
    const auto count_lines = [](const std::string& s) {
      return std::count(s.begin(), s.end(), '\n');
    };
    const bool shapes = count_lines(series) == base.steps + 2 &&
                        count_lines(ens) == base.steps + 2 &&
                        count_lines(ck) == 11 &&
                        count_lines(outc) == base.paths + 1;
    push(out, "harness.artifact_shapes", shapes,
         "CSV row counts match steps, checkpoints, and path counts");
  }

  {
    bool ok = true;
    std::string detail;
    for (const std::string& name : preset_names()) {
      const ScenarioConfig c = preset_scenario(name);
      const std::string s1 = serialize_config(c);
      const ScenarioConfig c2 = parse_config(s1);
      const std::string s2 = serialize_config(c2);
      ok = ok && s1 == s2 && config_hash(c) == config_hash(c2);
      detail = name + " hash " + config_hash(c);
    }
    push(out, "harness.config_roundtrip_idempotent", ok, detail);
  }

  {
    const bool units = std::abs(parse_quantity("3.801e-5 eV") - 3.801e-5) < 1e-18 &&
                       std::abs(parse_quantity("5 keV") - 5000.0) < 1e-9 &&
                       std::abs(parse_quantity("2 ms") - 0.002) < 1e-15 &&
                       std::abs(parse_quantity("3 MHz") - 3e6) < 1e-6 &&
                       std::abs(parse_quantity("0.7") - 0.7) < 1e-15;
    const bool rejects = raises<ConfigInvalid>([] { parse_quantity("5 parsec"); }) &&
                         raises<ConfigInvalid>([] { parse_config("{}"); }) &&
                         raises<ConfigInvalid>([] {
                           parse_config(R"({"spectrum": {"levels": [0, 1]},
                             "initial_state": {"pure": [[0.5477225575051661, 0],
                                                        [0.8366600265340756, 0]]},
                             "noise": {"kind": "gamma", "intensity": 1.0,
                                       "scale": 2.0, "lambda": 1.0},
                             "grid": {"steps": 10, "horizon": 1.0}})");
                         });
    push(out, "harness.config_parsing", units && rejects,
         "unit suffixes resolve; malformed and out-of-domain configs throw");
  }

  {
    PhiloxRng a(7, 0), b(7, 0), c(7, 1);
    bool same = true, different = false;
    for (int i = 0; i < 8; ++i) {
      const std::uint64_t va = a(), vb = b(), vc = c();
      same = same && va == vb;
      different = different || va != vc;
    }
    push(out, "harness.rng_streams", same && different,
         "equal (seed, stream) reproduces; distinct streams diverge");
  }

  {
    ScenarioConfig config = small_brownian_config(seed);
    config.horizon = 200.0;  // 25 / Gamma at Gamma = 1/8
    config.steps = 100;
    config.paths = 400;
    const EnsembleResult result = run_ensemble(config);
    const TestReport born = born_test(config, result);
    const TestReport martingale = martingale_test(config, result);
    const TestReport supermartingale = supermartingale_test(config, result);
    const TestReport lln = mean_density_test(config, result);
    const bool coverage = result.collapse_fraction >= 0.99;
    push(out, "harness.ensemble_reports_pass",
         born.passed && martingale.passed && supermartingale.passed && lln.passed &&
             coverage,
         "born/martingale/supermartingale/mean-state all pass; collapse fraction " +
             fmt(result.collapse_fraction));

    ScenarioConfig distorted = config;
    ComplexVector flat(2);
    flat << std::sqrt(0.5), std::sqrt(0.5);
    distorted.initial_state = flat * flat.adjoint();
    const TestReport wrong = born_test(distorted, result);
    push(out, "harness.born_negative_control", !wrong.passed,
         "frequencies from p = (0.3, 0.7) reject a claimed p = (0.5, 0.5) prior");

    std::vector<TestReport> reports;
    reports.push_back(born);
    const std::string summary = summary_json(config, result, reports);
    const nlohmann::json parsed = nlohmann::json::parse(summary);
    const bool json_ok = parsed.at("config_hash").get<std::string>() ==
                             config_hash(config) &&
                         parsed.at("version").get<std::string>() == kVersion &&
                         parsed.at("tests").size() == 1;
    push(out, "harness.summary_document", json_ok,
         "summary parses with matching config hash and version");
  }

  {
    bool ok = true;
    std::string detail;
    const std::vector<double> times = {1.0, 5.0, 25.0};
    for (const TestModel& tm : test_models()) {
      const TestReport report =
          exceedance_test(tm.model, tm.kappa_tail, 0.1, times, 2000, seed ^ 0x7e57);
      ok = ok && report.passed;
      if (!report.passed) detail += std::string(tm.tag) + " failed; ";
    }
    if (ok) detail = "empirical exceedance within bound + 3 se for every kind";
    push(out, "harness.martingale_exceedance_bound", ok, detail);
  }

  return out;
}

std::vector<CheckResult> validate_all(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const auto append = [&out](std::vector<CheckResult> group) {
    for (CheckResult& r : group) out.push_back(std::move(r));
  };
  append(validate_quantum());
  append(validate_levy(seed));
  append(validate_information(seed));
  append(validate_reduction(seed));
  append(validate_decoherence(seed));
  append(validate_harness(seed));
  return out;
}

}  // namespace levycollapse
