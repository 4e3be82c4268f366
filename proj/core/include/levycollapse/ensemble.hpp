#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levycollapse/config.hpp"
#include "levycollapse/reduction.hpp"

namespace levycollapse {

// One conditional trajectory with its filtered summaries on the full grid.
struct SimulatedPath {
  std::vector<double> grid;
  std::vector<double> xi;
  std::vector<std::vector<double>> posteriors;  // per grid point
  std::vector<double> energy;                   // posterior mean energy
  std::vector<double> variance;                 // posterior energy variance
  std::vector<double> purity;
  int outcome = -1;
  std::optional<int> detected;
};

SimulatedPath simulate_path(const ScenarioConfig& config, std::uint64_t path_index);

struct PathSummary {
  int outcome = -1;
  std::optional<int> detected;
  std::vector<double> final_posteriors;
};

/*
 * Aggregated conditional-mixture ensemble. Per-path per-checkpoint
 * coherence factors s_mn = sqrt(pi_m pi_n) (upper triangle, diagonal
 * first through index_of) determine every path-level statistic the
 * reports need; together with the shared projected blocks they rebuild
 * the state exactly.
 */
struct EnsembleResult {
  std::vector<double> grid;
  std::vector<std::size_t> checkpoints;  // grid indices, last == final point

  std::vector<double> mean_energy;    // per grid point
  std::vector<double> se_energy;
  std::vector<double> mean_variance;
  std::vector<double> se_variance;

  int num_levels = 0;
  std::vector<double> coherences;  // [path][checkpoint][triangle] flattened
  std::vector<double> mean_coherence;  // [checkpoint][triangle]
  std::vector<ComplexMatrix> mean_density;  // per checkpoint

  std::vector<PathSummary> paths;
  std::size_t collapsed_count = 0;
  double collapse_fraction = 0.0;

  std::string config_hash;
  std::string version;

  std::size_t triangle_size() const {
    const std::size_t n = static_cast<std::size_t>(num_levels);
    return n * (n + 1) / 2;
  }
  // (m, k) with m <= k to flattened triangle index; diagonal entries are
  // the posteriors themselves.
  std::size_t index_of(int m, int k) const;
  double coherence(std::size_t path, std::size_t checkpoint, std::size_t idx) const;
};

// Runs config.paths conditional trajectories with per-path streams derived
// from (seed, path index); aggregation order is fixed by path index, so the
// result is bit-identical for every thread count.
EnsembleResult run_ensemble(const ScenarioConfig& config,
                            std::size_t num_checkpoints = 10);

// ---- output artifacts (deterministic, no timestamps) ----
void write_path_series_csv(const std::string& file, const SimulatedPath& path);
void write_ensemble_series_csv(const std::string& file, const EnsembleResult& result);
void write_checkpoints_csv(const std::string& file, const EnsembleResult& result);
void write_outcomes_csv(const std::string& file, const EnsembleResult& result);

std::string path_series_csv(const SimulatedPath& path);
std::string ensemble_series_csv(const EnsembleResult& result);
std::string checkpoints_csv(const EnsembleResult& result);
std::string outcomes_csv(const EnsembleResult& result);

}  // namespace levycollapse
