#include "levycollapse/information.hpp"

#include <cmath>
#include <random>

#include "levycollapse/errors.hpp"

namespace levycollapse {

Signal::Signal(std::vector<double> energies, std::vector<double> probabilities,
               double lambda)
    : energies_(std::move(energies)),
      probabilities_(std::move(probabilities)),
      lambda_(lambda) {
  if (energies_.empty()) throw EmptySpectrum("signal has no levels");
  if (energies_.size() != probabilities_.size())
    throw DimensionMismatch("energies and probabilities differ in count");
  double total = 0.0;
  for (double p : probabilities_) {
    if (p < 0.0) throw InvalidState("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidState("probabilities do not sum to one");
}

Signal Signal::from_state(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                          double lambda) {
  return Signal(spectrum.levels(), level_probabilities(rho, spectrum), lambda);
}

double Signal::energy(int j) const {
  if (j < 0 || j >= size()) throw IndexOutOfRange("signal level index");
  return energies_[static_cast<std::size_t>(j)];
}

double Signal::probability(int j) const {
  if (j < 0 || j >= size()) throw IndexOutOfRange("signal level index");
  return probabilities_[static_cast<std::size_t>(j)];
}

void Signal::validate_against(const LevyModel& model) const {
  for (int j = 0; j < size(); ++j) {
    if (!model.in_domain(coupling(j)))
      throw OutsideExponentDomain(
          "coupling lambda E_" + std::to_string(j + 1) + " = " +
          std::to_string(coupling(j)) + " is outside the exponent domain");
  }
}

int sample_outcome(const Signal& signal, PhiloxRng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cum = 0.0;
  for (int j = 0; j < signal.size(); ++j) {
    cum += signal.probability(j);
    if (u < cum) return j;
  }
  return signal.size() - 1;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw BadGrid("grid needs at least two points");
  if (grid.front() != 0.0) throw BadGrid("grid must start at zero");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw BadGrid("grid must be strictly increasing");
}

}  // namespace

InformationPath sample_information_path(const LevyModel& model, const Signal& signal,
                                        int outcome, std::span<const double> grid,
                                        PhiloxRng& rng) {
  if (outcome < 0 || outcome >= signal.size())
    throw IndexOutOfRange("outcome index");
  check_grid(grid);
  signal.validate_against(model);

  const LevyModel conditional = model.esscher_tilt(signal.coupling(outcome));
  InformationPath path;
  path.times.assign(grid.begin(), grid.end());
  path.values.resize(grid.size());
  path.values[0] = 0.0;
  path.outcome = outcome;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    path.values[k] = path.values[k - 1] + conditional.sample_increment(dt, rng);
  }
  return path;
}

double conditional_exponent(const LevyModel& model, double lambda_h, double alpha) {
  if (!model.in_domain(lambda_h))
    throw OutsideExponentDomain("conditioning coupling outside domain");
  return model.psi(alpha + lambda_h) - model.psi(lambda_h);
}

std::vector<double> innovations_path(const LevyModel& model,
                                     const InformationPath& path,
                                     std::span<const double> posterior_energy,
                                     double sigma) {
  if (model.kind() != NoiseKind::Brownian)
    throw WrongNoiseKind("innovations are defined for the Brownian kind only");
  if (path.times.size() != path.values.size() ||
      path.times.size() != posterior_energy.size())
    throw DimensionMismatch("path and posterior-energy series differ in length");
  check_grid(path.times);

  const double p = model.drift();
  const double sqrt_q = std::sqrt(model.diffusion());
  if (!(sqrt_q > 0.0)) throw NonpositiveInput("diffusion must be > 0");

  std::vector<double> w(path.times.size());
  double integral = 0.0;
  w[0] = 0.0;
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double dt = path.times[k] - path.times[k - 1];
    integral += 0.5 * (posterior_energy[k] + posterior_energy[k - 1]) * dt;
    w[k] = (path.values[k] - p * path.times[k] - sqrt_q * sigma * integral) / sqrt_q;
  }
  return w;
}

}  // namespace levycollapse
