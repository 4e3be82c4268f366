#include "levycollapse/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include "levycollapse/errors.hpp"
#include "levycollapse/rng.hpp"
#include "levycollapse/stats.hpp"

namespace levycollapse {

namespace {

std::vector<std::size_t> make_checkpoints(std::size_t grid_size,
                                          std::size_t requested) {
  // Evenly spaced interior points ending exactly on the final grid index.
  const std::size_t count = std::min(requested, grid_size - 1);
  std::vector<std::size_t> cp(count);
  for (std::size_t i = 0; i < count; ++i)
    cp[i] = (grid_size - 1) * (i + 1) / count;
  return cp;
}

struct PathScratch {
  std::vector<double> energy;          // per grid point
  std::vector<double> variance;        // per grid point
  std::vector<double> coherences;      // per checkpoint x triangle
  PathSummary summary;
};

}  // namespace

std::size_t EnsembleResult::index_of(int m, int k) const {
  if (m > k) std::swap(m, k);
  const std::size_t n = static_cast<std::size_t>(num_levels);
  const std::size_t mm = static_cast<std::size_t>(m);
  return mm * n - mm * (mm - 1) / 2 + static_cast<std::size_t>(k - m);
}

double EnsembleResult::coherence(std::size_t path, std::size_t checkpoint,
                                 std::size_t idx) const {
  const std::size_t tri = triangle_size();
  return coherences[(path * checkpoints.size() + checkpoint) * tri + idx];
}

SimulatedPath simulate_path(const ScenarioConfig& config,
                            std::uint64_t path_index) {
  const LevyModel model = config.model();
  const EnergySpectrum spectrum = config.spectrum();
  const DensityMatrix rho0 = config.initial_density();
  const Signal signal = config.signal();
  const ClosedFormEvolver evolver(model, signal, rho0, spectrum);

  SimulatedPath out;
  out.grid = config.grid();

  PhiloxRng rng = path_rng(config.seed, path_index);
  out.outcome = sample_outcome(signal, rng);
  const InformationPath path =
      sample_information_path(model, signal, out.outcome, out.grid, rng);
  out.xi = path.values;

  const std::size_t points = out.grid.size();
  out.posteriors.resize(points);
  out.energy.resize(points);
  out.variance.resize(points);
  out.purity.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    out.posteriors[k] = evolver.posteriors(out.xi[k], out.grid[k]);
    double m1 = 0.0;
    double m2 = 0.0;
    for (int j = 0; j < signal.size(); ++j) {
      const double pj = out.posteriors[k][static_cast<std::size_t>(j)];
      m1 += signal.energy(j) * pj;
      m2 += signal.energy(j) * signal.energy(j) * pj;
    }
    out.energy[k] = m1;
    out.variance[k] = std::max(0.0, m2 - m1 * m1);
    out.purity[k] =
        evolver.density_from_posteriors(out.posteriors[k], out.grid[k]).purity();
  }
  out.detected = detect_collapse(out.posteriors.back(), config.collapse_threshold);
  return out;
}

EnsembleResult run_ensemble(const ScenarioConfig& config,
                            std::size_t num_checkpoints) {
  const LevyModel model = config.model();
  const EnergySpectrum spectrum = config.spectrum();
  const DensityMatrix rho0 = config.initial_density();
  const Signal signal = config.signal();
  const ClosedFormEvolver evolver(model, signal, rho0, spectrum);

  EnsembleResult result;
  result.grid = config.grid();
  result.checkpoints = make_checkpoints(result.grid.size(), num_checkpoints);
  result.num_levels = signal.size();
  result.config_hash = config_hash(config);
  result.version = kVersion;

  const std::size_t points = result.grid.size();
  const std::size_t n_paths = static_cast<std::size_t>(config.paths);
  const std::size_t n_ckpt = result.checkpoints.size();
  const std::size_t tri = result.triangle_size();
  const int n = signal.size();

  const auto compute_path = [&](std::uint64_t index, PathScratch& scratch) {
    PhiloxRng rng = path_rng(config.seed, index);
    const int outcome = sample_outcome(signal, rng);
    const InformationPath path =
        sample_information_path(model, signal, outcome, result.grid, rng);

    scratch.energy.resize(points);
    scratch.variance.resize(points);
    scratch.coherences.assign(n_ckpt * tri, 0.0);
    std::vector<double> pi;
    std::size_t next_ckpt = 0;
    for (std::size_t k = 0; k < points; ++k) {
      pi = evolver.posteriors(path.values[k], result.grid[k]);
      double m1 = 0.0;
      double m2 = 0.0;
      for (int j = 0; j < n; ++j) {
        m1 += signal.energy(j) * pi[static_cast<std::size_t>(j)];
        m2 += signal.energy(j) * signal.energy(j) * pi[static_cast<std::size_t>(j)];
      }
      scratch.energy[k] = m1;
      scratch.variance[k] = std::max(0.0, m2 - m1 * m1);
      if (next_ckpt < n_ckpt && result.checkpoints[next_ckpt] == k) {
        double* s = scratch.coherences.data() + next_ckpt * tri;
        std::size_t idx = 0;
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b)
            s[idx++] = std::sqrt(pi[static_cast<std::size_t>(a)] *
                                 pi[static_cast<std::size_t>(b)]);
        ++next_ckpt;
      }
    }
    scratch.summary.outcome = outcome;
    scratch.summary.detected = detect_collapse(pi, config.collapse_threshold);
    scratch.summary.final_posteriors = pi;
  };

  // Paths are computed in blocks (optionally in parallel) but always merged
  // in path order, so aggregates are independent of the thread count.
  std::vector<RunningMoments> energy_moments(points);
  std::vector<RunningMoments> variance_moments(points);
  std::vector<KahanSum> coherence_sums(n_ckpt * tri);
  result.coherences.resize(n_paths * n_ckpt * tri);
  result.paths.resize(n_paths);

  const int threads = config.resolved_threads();
  const std::size_t block = threads > 1 ? 512 * static_cast<std::size_t>(threads)
                                        : n_paths;
  std::vector<PathScratch> scratch_slots(std::min(block, n_paths));

  for (std::size_t base = 0; base < n_paths; base += block) {
    const std::size_t limit = std::min(base + block, n_paths);
    const std::size_t count = limit - base;
    if (threads > 1) {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
          for (std::size_t i = static_cast<std::size_t>(t); i < count;
               i += static_cast<std::size_t>(threads))
            compute_path(base + i, scratch_slots[i]);
        });
      }
      for (auto& th : pool) th.join();
    } else {
      for (std::size_t i = 0; i < count; ++i)
        compute_path(base + i, scratch_slots[i]);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const PathScratch& s = scratch_slots[i];
      const std::size_t p = base + i;
      for (std::size_t k = 0; k < points; ++k) {
        energy_moments[k].add(s.energy[k]);
        variance_moments[k].add(s.variance[k]);
      }
      for (std::size_t j = 0; j < n_ckpt * tri; ++j) {
        coherence_sums[j].add(s.coherences[j]);
        result.coherences[p * n_ckpt * tri + j] = s.coherences[j];
      }
      result.paths[p] = s.summary;
      if (s.summary.detected) ++result.collapsed_count;
    }
  }

  result.mean_energy.resize(points);
  result.se_energy.resize(points);
  result.mean_variance.resize(points);
  result.se_variance.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    result.mean_energy[k] = energy_moments[k].mean();
    result.se_energy[k] = energy_moments[k].standard_error();
    result.mean_variance[k] = variance_moments[k].mean();
    result.se_variance[k] = variance_moments[k].standard_error();
  }
  result.mean_coherence.resize(n_ckpt * tri);
  for (std::size_t j = 0; j < n_ckpt * tri; ++j)
    result.mean_coherence[j] =
        coherence_sums[j].value() / static_cast<double>(n_paths);
  result.collapse_fraction =
      static_cast<double>(result.collapsed_count) / static_cast<double>(n_paths);

  // Ensemble-mean state at each checkpoint, rebuilt from the mean coherence
  // factors; the diagonal means are exact posterior means.
  result.mean_density.reserve(n_ckpt);
  for (std::size_t ck = 0; ck < n_ckpt; ++ck) {
    const double t = result.grid[result.checkpoints[ck]];
    ComplexMatrix mu = ComplexMatrix::Zero(spectrum.dim(), spectrum.dim());
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        const double wa = evolver.weight(a);
        const double wb = evolver.weight(b);
        const double mean_s = result.mean_coherence[ck * tri + idx];
        ++idx;
        if (wa <= 0.0 || wb <= 0.0) continue;
        const double mag = mean_s / std::sqrt(wa * wb);
        Complex coeff(mag, 0.0);
        if (spectrum.phases_enabled() && a != b) {
          const double theta =
              -std::remainder((spectrum.level(a) - spectrum.level(b)) * t /
                                  spectrum.hbar(),
                              2.0 * std::numbers::pi);
          coeff = mag * Complex(std::cos(theta), std::sin(theta));
        }
        const ComplexMatrix block =
            spectrum.projector(a) * rho0.matrix() * spectrum.projector(b);
        mu += coeff * block;
        if (a != b) mu += std::conj(coeff) * block.adjoint();
      }
    }
    result.mean_density.push_back(0.5 * (mu + mu.adjoint().eval()));
  }
  return result;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + file);
  out << text;
}

}  // namespace

std::string path_series_csv(const SimulatedPath& path) {
  const std::size_t n = path.posteriors.empty() ? 0 : path.posteriors[0].size();
  std::string out = "t,xi";
  for (std::size_t j = 0; j < n; ++j) out += ",pi_" + std::to_string(j + 1);
  out += ",energy,variance,purity\n";
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    append_number(out, path.grid[k]);
    out += ',';
    append_number(out, path.xi[k]);
    for (std::size_t j = 0; j < n; ++j) {
      out += ',';
      append_number(out, path.posteriors[k][j]);
    }
    out += ',';
    append_number(out, path.energy[k]);
    out += ',';
    append_number(out, path.variance[k]);
    out += ',';
    append_number(out, path.purity[k]);
    out += '\n';
  }
  return out;
}

std::string ensemble_series_csv(const EnsembleResult& result) {
  std::string out = "t,mean_energy,se_energy,mean_variance,se_variance\n";
  for (std::size_t k = 0; k < result.grid.size(); ++k) {
    append_number(out, result.grid[k]);
    out += ',';
    append_number(out, result.mean_energy[k]);
    out += ',';
    append_number(out, result.se_energy[k]);
    out += ',';
    append_number(out, result.mean_variance[k]);
    out += ',';
    append_number(out, result.se_variance[k]);
    out += '\n';
  }
  return out;
}

std::string checkpoints_csv(const EnsembleResult& result) {
  std::string out = "t";
  const Eigen::Index d =
      result.mean_density.empty() ? 0 : result.mean_density[0].rows();
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      out += ",rho_" + std::to_string(r + 1) + std::to_string(c + 1) + "_re";
      out += ",rho_" + std::to_string(r + 1) + std::to_string(c + 1) + "_im";
    }
  out += '\n';
  for (std::size_t ck = 0; ck < result.checkpoints.size(); ++ck) {
    append_number(out, result.grid[result.checkpoints[ck]]);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) {
        out += ',';
        append_number(out, result.mean_density[ck](r, c).real());
        out += ',';
        append_number(out, result.mean_density[ck](r, c).imag());
      }
    out += '\n';
  }
  return out;
}

std::string outcomes_csv(const EnsembleResult& result) {
  std::string out = "path,outcome,detected";
  for (int j = 0; j < result.num_levels; ++j)
    out += ",pi_" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t p = 0; p < result.paths.size(); ++p) {
    out += std::to_string(p);
    out += ',';
    out += std::to_string(result.paths[p].outcome + 1);
    out += ',';
    if (result.paths[p].detected)
      out += std::to_string(*result.paths[p].detected + 1);
    for (double pi : result.paths[p].final_posteriors) {
      out += ',';
      append_number(out, pi);
    }
    out += '\n';
  }
  return out;
}

void write_path_series_csv(const std::string& file, const SimulatedPath& path) {
  write_text(file, path_series_csv(path));
}
void write_ensemble_series_csv(const std::string& file,
                               const EnsembleResult& result) {
  write_text(file, ensemble_series_csv(result));
}
void write_checkpoints_csv(const std::string& file, const EnsembleResult& result) {
  write_text(file, checkpoints_csv(result));
}
void write_outcomes_csv(const std::string& file, const EnsembleResult& result) {
  write_text(file, outcomes_csv(result));
}

}  // namespace levycollapse
