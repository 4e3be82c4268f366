#pragma once

#include <optional>
#include <span>
#include <vector>

#include "levycollapse/levy.hpp"
#include "levycollapse/quantum.hpp"
#include "levycollapse/rng.hpp"

namespace levycollapse {

/*
 * Discrete signal carried by the noise: level couplings lambda * E_j with
 * prior occupation probabilities p_j. Every coupling must lie inside the
 * exponent domain of the noise model driving it.
 */
class Signal {
public:
  Signal(std::vector<double> energies, std::vector<double> probabilities,
         double lambda);
  static Signal from_state(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                           double lambda);

  int size() const { return static_cast<int>(energies_.size()); }
  double energy(int j) const;
  double probability(int j) const;
  double lambda() const { return lambda_; }
  double coupling(int j) const { return lambda_ * energy(j); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<double>& probabilities() const { return probabilities_; }

  // Throws OutsideExponentDomain unless every coupling is admissible.
  void validate_against(const LevyModel& model) const;

private:
  std::vector<double> energies_;
  std::vector<double> probabilities_;
  double lambda_;
};

// Piecewise-sampled noise trajectory; times[0] = 0 and values[0] = 0.
struct InformationPath {
  std::vector<double> times;
  std::vector<double> values;
  int outcome = -1;  // level index the path was conditioned on
};

// Draws a level index from the signal's prior.
int sample_outcome(const Signal& signal, PhiloxRng& rng);

// Conditional noise trajectory given the outcome: increments follow the
// Esscher-tilted law at kappa = lambda E_outcome, evaluated on the grid.
InformationPath sample_information_path(const LevyModel& model, const Signal& signal,
                                        int outcome, std::span<const double> grid,
                                        PhiloxRng& rng);

// psi(alpha + lambda_h) - psi(lambda_h): exponent of the noise conditional
// on the energy coupling lambda_h.
double conditional_exponent(const LevyModel& model, double lambda_h, double alpha);

/*
 * Innovations process W_t = (xi_t - p t - sqrt(q) sigma I_t)/sqrt(q) with
 * I_t the trapezoid integral of the posterior energy series; reduces to
 * xi_t - sigma I_t for the driftless unit-diffusion model. Brownian only.
 */
std::vector<double> innovations_path(const LevyModel& model,
                                     const InformationPath& path,
                                     std::span<const double> posterior_energy,
                                     double sigma);

}  // namespace levycollapse
