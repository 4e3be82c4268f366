#include "levycollapse/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "levycollapse/decoherence.hpp"
#include "levycollapse/errors.hpp"

namespace levycollapse {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit_factor(const std::string& suffix) {
  if (suffix.empty()) return 1.0;
  if (suffix == "eV") return 1.0;
  if (suffix == "meV") return 1e-3;
  if (suffix == "keV") return 1e3;
  if (suffix == "MeV") return 1e6;
  if (suffix == "s") return 1.0;
  if (suffix == "ms") return 1e-3;
  if (suffix == "us") return 1e-6;
  if (suffix == "Hz") return 1.0;
  if (suffix == "kHz") return 1e3;
  if (suffix == "MHz") return 1e6;
  throw ConfigInvalid("unknown unit suffix: " + suffix);
}

double quantity_from(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_quantity(v.get<std::string>());
    } catch (const ConfigInvalid& e) {
      throw ConfigInvalid(where + ": " + e.what());
    }
  }
  throw ConfigInvalid(where + ": expected a number or unit-suffixed string");
}

Complex complex_from(const json& v, const std::string& where) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw ConfigInvalid(where + ": expected a number or [re, im]");
}

ComplexMatrix matrix_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    throw ConfigInvalid(where + ": expected an array of rows");
  const std::size_t rows = v.size();
  ComplexMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = v[r];
    if (!row.is_array() || row.size() != rows)
      throw ConfigInvalid(where + ": matrix must be square");
    if (r == 0) m.resize(rows, rows);
    for (std::size_t c = 0; c < rows; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from(row[c], where);
  }
  return m;
}

json matrix_to(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigInvalid(where + ": missing key '" + key + "'");
  return *it;
}

}  // namespace

double parse_quantity(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) throw ConfigInvalid("not a quantity: '" + text + "'");
  std::string suffix(end);
  // Trim a single space between number and unit.
  if (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
  return value * unit_factor(suffix);
}

LevyModel ScenarioConfig::model() const {
  switch (kind) {
    case NoiseKind::Brownian: return LevyModel::brownian(drift, diffusion);
    case NoiseKind::Poisson: return LevyModel::poisson(intensity);
    case NoiseKind::CompoundPoissonExp:
      return LevyModel::compound_poisson_exp(intensity, jump_rate);
    case NoiseKind::Gamma: return LevyModel::gamma(intensity, scale);
  }
  throw ConfigInvalid("unreachable noise kind");
}

EnergySpectrum ScenarioConfig::spectrum() const {
  return EnergySpectrum::from_dense(hamiltonian, degeneracy_tol, hbar);
}

DensityMatrix ScenarioConfig::initial_density() const {
  return DensityMatrix(initial_state);
}

Signal ScenarioConfig::signal() const {
  return Signal::from_state(initial_density(), spectrum(), lambda);
}

std::vector<double> ScenarioConfig::grid() const {
  if (!(horizon > 0.0)) throw ConfigInvalid("horizon was not resolved");
  if (steps < 1) throw ConfigInvalid("grid.steps must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(steps) + 1);
  for (std::size_t k = 0; k < g.size(); ++k)
    g[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
  g.back() = horizon;
  return g;
}

int ScenarioConfig::resolved_threads() const {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigInvalid("top level must be an object");

  ScenarioConfig c;
  c.name = root.value("name", std::string("custom"));

  const json& spectrum = require(root, "spectrum", "config");
  if (spectrum.contains("hamiltonian")) {
    c.hamiltonian = matrix_from(spectrum["hamiltonian"], "spectrum.hamiltonian");
  } else if (spectrum.contains("levels")) {
    const json& levels = spectrum["levels"];
    if (!levels.is_array() || levels.empty())
      throw ConfigInvalid("spectrum.levels: expected a nonempty array");
    const Eigen::Index d = static_cast<Eigen::Index>(levels.size());
    c.hamiltonian = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      c.hamiltonian(j, j) =
          quantity_from(levels[static_cast<std::size_t>(j)], "spectrum.levels");
  } else {
    throw ConfigInvalid("spectrum: need 'levels' or 'hamiltonian'");
  }
  if (spectrum.contains("degeneracy_tol"))
    c.degeneracy_tol = quantity_from(spectrum["degeneracy_tol"],
                                     "spectrum.degeneracy_tol");

  if (root.contains("hbar")) {
    const json& hb = root["hbar"];
    if (hb.is_string() && hb.get<std::string>() == "inf")
      c.hbar = kInf;
    else
      c.hbar = quantity_from(hb, "hbar");
    if (!(c.hbar > 0.0)) throw ConfigInvalid("hbar must be positive");
  }

  const json& state = require(root, "initial_state", "config");
  if (state.contains("matrix")) {
    c.initial_state = matrix_from(state["matrix"], "initial_state.matrix");
  } else if (state.contains("pure")) {
    const json& amps = state["pure"];
    if (!amps.is_array() || amps.empty())
      throw ConfigInvalid("initial_state.pure: expected a nonempty array");
    ComplexVector psi(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t j = 0; j < amps.size(); ++j)
      psi(static_cast<Eigen::Index>(j)) = complex_from(amps[j], "initial_state.pure");
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw ConfigInvalid("initial_state.pure: zero vector");
    psi /= norm;
    c.initial_state = psi * psi.adjoint();
  } else {
    throw ConfigInvalid("initial_state: need 'pure' or 'matrix'");
  }

  const json& noise = require(root, "noise", "config");
  c.kind = noise_kind_from_string(
      require(noise, "kind", "noise").get<std::string>());
  // Shorthand: sigma alone means unit diffusion with lambda = sigma.
  const bool sigma_shorthand =
      c.kind == NoiseKind::Brownian && noise.contains("sigma");
  if (!sigma_shorthand)
    c.lambda = quantity_from(require(noise, "lambda", "noise"), "noise.lambda");
  switch (c.kind) {
    case NoiseKind::Brownian:
      if (sigma_shorthand) {
        if (noise.contains("diffusion") || noise.contains("drift") ||
            noise.contains("lambda"))
          throw ConfigInvalid(
              "noise: sigma replaces lambda and drift/diffusion");
        c.diffusion = 1.0;
        c.lambda = quantity_from(noise["sigma"], "noise.sigma");
      } else {
        c.drift = noise.contains("drift")
                      ? quantity_from(noise["drift"], "noise.drift")
                      : 0.0;
        c.diffusion =
            quantity_from(require(noise, "diffusion", "noise"), "noise.diffusion");
      }
      break;
    case NoiseKind::Poisson:
      c.intensity =
          quantity_from(require(noise, "intensity", "noise"), "noise.intensity");
      break;
    case NoiseKind::CompoundPoissonExp:
      c.intensity =
          quantity_from(require(noise, "intensity", "noise"), "noise.intensity");
      c.jump_rate =
          quantity_from(require(noise, "jump_rate", "noise"), "noise.jump_rate");
      break;
    case NoiseKind::Gamma:
      c.intensity =
          quantity_from(require(noise, "intensity", "noise"), "noise.intensity");
      c.scale = quantity_from(require(noise, "scale", "noise"), "noise.scale");
      break;
  }

  if (root.contains("grid")) {
    const json& grid = root["grid"];
    if (grid.contains("steps")) {
      if (!grid["steps"].is_number_integer())
        throw ConfigInvalid("grid.steps: expected an integer");
      c.steps = grid["steps"].get<int>();
      if (c.steps < 1) throw ConfigInvalid("grid.steps must be >= 1");
    }
    if (grid.contains("horizon")) {
      const json& h = grid["horizon"];
      if (h.is_string() && h.get<std::string>() == "auto")
        c.horizon = 0.0;
      else
        c.horizon = quantity_from(h, "grid.horizon");
    }
  }

  if (root.contains("ensemble")) {
    const json& ens = root["ensemble"];
    if (ens.contains("paths")) {
      c.paths = ens["paths"].get<int>();
      if (c.paths < 1) throw ConfigInvalid("ensemble.paths must be >= 1");
    }
    if (ens.contains("seed")) c.seed = ens["seed"].get<std::uint64_t>();
    if (ens.contains("threads")) {
      c.threads = ens["threads"].get<int>();
      if (c.threads < 0) throw ConfigInvalid("ensemble.threads must be >= 0");
    }
  }

  if (root.contains("collapse_threshold")) {
    c.collapse_threshold =
        quantity_from(root["collapse_threshold"], "collapse_threshold");
    if (!(c.collapse_threshold > 0.0 && c.collapse_threshold < 0.5))
      throw ConfigInvalid("collapse_threshold must be in (0, 1/2)");
  }
  if (root.contains("output_dir"))
    c.output_dir = root["output_dir"].get<std::string>();

  // Everything below validates the assembled objects and resolves "auto".
  try {
    const EnergySpectrum spec = c.spectrum();
    const DensityMatrix rho0 = c.initial_density();
    const LevyModel model = c.model();
    c.signal().validate_against(model);
    if (!(c.horizon > 0.0)) {
      const double min_rate = min_gamma_rate(spec, model, c.lambda);
      if (!std::isfinite(min_rate) || !(min_rate > 0.0))
        throw ConfigInvalid(
            "horizon 'auto' needs a positive damping rate; give grid.horizon");
      c.horizon = 10.0 / min_rate;
    }
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("invalid scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ConfigInvalid("cannot open config file: " + file_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  json root;
  root["name"] = config.name;
  root["spectrum"]["hamiltonian"] = matrix_to(config.hamiltonian);
  if (config.degeneracy_tol >= 0.0)
    root["spectrum"]["degeneracy_tol"] = config.degeneracy_tol;
  root["hbar"] = std::isfinite(config.hbar) ? json(config.hbar) : json("inf");
  root["initial_state"]["matrix"] = matrix_to(config.initial_state);
  json& noise = root["noise"];
  noise["kind"] = to_string(config.kind);
  noise["lambda"] = config.lambda;
  switch (config.kind) {
    case NoiseKind::Brownian:
      noise["drift"] = config.drift;
      noise["diffusion"] = config.diffusion;
      break;
    case NoiseKind::Poisson:
      noise["intensity"] = config.intensity;
      break;
    case NoiseKind::CompoundPoissonExp:
      noise["intensity"] = config.intensity;
      noise["jump_rate"] = config.jump_rate;
      break;
    case NoiseKind::Gamma:
      noise["intensity"] = config.intensity;
      noise["scale"] = config.scale;
      break;
  }
  root["grid"]["horizon"] = config.horizon;
  root["grid"]["steps"] = config.steps;
  root["ensemble"]["paths"] = config.paths;
  root["ensemble"]["seed"] = config.seed;
  root["ensemble"]["threads"] = config.threads;
  root["collapse_threshold"] = config.collapse_threshold;
  root["output_dir"] = config.output_dir;
  return root.dump(2);
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = serialize_config(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

ScenarioConfig preset_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  const double amp1 = std::sqrt(0.3);
  const double amp2 = std::sqrt(0.7);
  ComplexVector psi(2);
  psi << Complex(amp1, 0.0), Complex(amp2, 0.0);
  c.initial_state = psi * psi.adjoint();
  c.hbar = 1.0;
  c.lambda = 1.0;
  c.steps = 200;
  c.paths = 5000;
  c.seed = 1;

  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  if (name == "appendix-a") {
    h(1, 1) = 1.0;
    c.kind = NoiseKind::Brownian;
    c.drift = 0.0;
    c.diffusion = 1.0;
  } else if (name == "appendix-b") {
    h(1, 1) = 1.0;
    c.kind = NoiseKind::Poisson;
    c.intensity = 1.0;
  } else if (name == "appendix-c") {
    h(1, 1) = 0.5;
    c.kind = NoiseKind::Gamma;
    c.intensity = 1.0;
    c.scale = 1.0;
  } else {
    throw ConfigInvalid("unknown scenario: " + name +
                        " (available: appendix-a, appendix-b, appendix-c)");
  }
  c.hamiltonian = h;
  c.horizon = 10.0 / min_gamma_rate(c.spectrum(), c.model(), c.lambda);
  return c;
}

std::vector<std::string> preset_names() {
  return {"appendix-a", "appendix-b", "appendix-c"};
}

}  // namespace levycollapse
