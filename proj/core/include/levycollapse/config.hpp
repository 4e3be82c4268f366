#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levycollapse/information.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/quantum.hpp"

namespace levycollapse {

inline constexpr const char* kVersion = "0.1.0";

/*
 * Fully resolved run description. Parsing resolves unit suffixes
 * (eV/keV/MeV/meV, s/ms/us, Hz/kHz/MHz -> internal eV and seconds) and the
 * automatic horizon, so serialization is canonical and round-trip
 * idempotent.
 */
struct ScenarioConfig {
  std::string name = "custom";
  ComplexMatrix hamiltonian;     // dense Hermitian
  ComplexMatrix initial_state;   // density matrix
  double hbar = 1.0;             // +inf disables phase rotation
  double degeneracy_tol = -1.0;  // negative selects the spectral default

  NoiseKind kind = NoiseKind::Brownian;
  double drift = 0.0;
  double diffusion = 0.0;
  double intensity = 0.0;
  double jump_rate = 0.0;
  double scale = 0.0;
  double lambda = 1.0;

  double horizon = 0.0;  // resolved at parse; 0 means "auto" pre-resolution
  int steps = 200;

  int paths = 5000;
  std::uint64_t seed = 1;
  int threads = 1;  // 0 selects hardware concurrency

  double collapse_threshold = 1e-6;
  std::string output_dir = "out";

  LevyModel model() const;
  EnergySpectrum spectrum() const;
  DensityMatrix initial_density() const;
  Signal signal() const;
  std::vector<double> grid() const;
  int resolved_threads() const;
};

// Parse from JSON text / file; validates everything it touches and throws
// ConfigInvalid with a field path on schema violations.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& file_path);

// Canonical JSON form; parse(serialize(c)) == c and serialization of the
// reparse is byte-identical.
std::string serialize_config(const ScenarioConfig& config);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const ScenarioConfig& config);

// Built-in two-level demonstration scenarios.
ScenarioConfig preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

// Number or string-with-unit-suffix to internal units (eV, s).
double parse_quantity(const std::string& text);

}  // namespace levycollapse
