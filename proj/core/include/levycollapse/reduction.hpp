#pragma once

#include <optional>
#include <span>
#include <vector>

#include "levycollapse/information.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/quantum.hpp"

namespace levycollapse {

/*
 * Posterior level probabilities given the noise value xi at time t:
 *   pi_j = p_j exp(lambda E_j xi - psi(lambda E_j) t) / normalization.
 * Weights are combined in log space (max-subtracted), so couplings with
 * |lambda E_j xi| of order 1e4 stay finite.
 */
std::vector<double> posterior_probabilities(const LevyModel& model,
                                            const Signal& signal, double xi_t,
                                            double t);

/*
 * Exact conditional state at time t, evaluated blockwise:
 *   P_m rho_t P_n = e^{-i(E_m - E_n)t/hbar}
 *                   e^{(l_m + l_n)/2} P_m rho_0 P_n / Z,
 * with l_j = lambda E_j xi - psi(lambda E_j) t and
 * Z = sum_k e^{l_k} tr(P_k rho_0). Precomputes the projected blocks of
 * rho_0 once so repeated evaluation along a path is cheap.
 */
class ClosedFormEvolver {
public:
  ClosedFormEvolver(const LevyModel& model, const Signal& signal,
                    const DensityMatrix& rho0, const EnergySpectrum& spectrum);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  double weight(int j) const { return weights_[static_cast<std::size_t>(j)]; }

  std::vector<double> posteriors(double xi_t, double t) const;
  DensityMatrix density(double xi_t, double t) const;

  // Rebuilds the state from stored posteriors; coherences are
  // sqrt(pi_m pi_n), so the pair (posteriors, t) determines the state.
  DensityMatrix density_from_posteriors(std::span<const double> pi, double t) const;

private:
  ComplexMatrix assemble(std::span<const double> pi, double t) const;

  std::vector<double> levels_;
  std::vector<double> couplings_;   // lambda E_j
  std::vector<double> psi_values_;  // psi(lambda E_j)
  std::vector<double> weights_;     // tr(P_j rho_0)
  std::vector<ComplexMatrix> blocks_;  // row-major m*n upper structure
  double hbar_;
  bool phases_;
  Eigen::Index dim_;
};

DensityMatrix evolve_density(const LevyModel& model, const Signal& signal,
                             const DensityMatrix& rho0,
                             const EnergySpectrum& spectrum, double xi_t, double t);

PureState evolve_state_vector(const LevyModel& model, const Signal& signal,
                              const PureState& psi0, const EnergySpectrum& spectrum,
                              double xi_t, double t);

/*
 * Euler-Maruyama step of the state-vector dynamics
 *   d psi = -i/hbar H psi dt - (sigma^2/8)(H - h)^2 psi dt
 *           + (sigma/2)(H - h) psi dW,   h = <psi|H|psi>,
 * renormalized after every step. Strong order 1/2 in the driving noise.
 */
std::vector<ComplexVector> euler_maruyama_vector(const EnergySpectrum& spectrum,
                                                 const ComplexVector& psi0,
                                                 double sigma,
                                                 std::span<const double> grid,
                                                 std::span<const double> dw);

/*
 * Euler-Maruyama step of the matrix dynamics
 *   d rho = -i/hbar [H, rho] dt
 *           + (sigma^2/4)(H rho H - rho H^2/2 - H^2 rho/2) dt
 *           + (sigma/2)((H - h) rho + rho (H - h)) dW,  h = tr(H rho),
 * trace-renormalized after every step; an eigenvalue below -1e-6 aborts.
 */
std::vector<ComplexMatrix> euler_maruyama_density(const EnergySpectrum& spectrum,
                                                  const ComplexMatrix& rho0,
                                                  double sigma,
                                                  std::span<const double> grid,
                                                  std::span<const double> dw);

// Level whose posterior exceeds 1 - delta, if any; delta must be in (0, 1/2).
std::optional<int> detect_collapse(std::span<const double> posteriors, double delta);

}  // namespace levycollapse
