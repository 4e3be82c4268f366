#pragma once

#include <vector>

#include "levycollapse/levy.hpp"
#include "levycollapse/quantum.hpp"

namespace levycollapse {

/*
 * Off-diagonal damping rate between levels m and n:
 *   Gamma_mn = psi(l E_m)/2 + psi(l E_n)/2 - psi(l (E_m + E_n)/2).
 * Nonnegative by convexity; zero iff E_m = E_n.
 */
double gamma_rate(const LevyModel& model, double lambda, double e_m, double e_n);

// Same rate from the characteristic triplet:
//   q l^2 (E_m - E_n)^2 / 8
//   + (1/2) integral (e^{l E_m z / 2} - e^{l E_n z / 2})^2 nu(dz).
double gamma_rate_integral(const LevyModel& model, double lambda, double e_m,
                           double e_n);
double gamma_rate_integral(double diffusion, const LevyMeasureSpec& measure,
                           double lambda, double e_m, double e_n);

// Same rate with the jump part in the form
//   2 integral e^{l (E_m + E_n) z / 2} sinh^2(l (E_m - E_n) z / 4) nu(dz).
double gamma_rate_sinh(const LevyModel& model, double lambda, double e_m,
                       double e_n);

// Curvature of the exponent at the midpoint coupling,
// q_eff = psi''(l (E_m + E_n)/2); the local diffusion strength the pair sees.
double effective_q(const LevyModel& model, double lambda, double e_m, double e_n);

// Small-gap rate l^2 (E_m - E_n)^2 q_eff / 8.
double small_gap_approx(const LevyModel& model, double lambda, double e_m,
                        double e_n);

// Ensemble-mean state: diagonal blocks frozen, off-diagonal blocks damped
// as e^{-i(E_m - E_n)t/hbar - Gamma_mn t}.
DensityMatrix mean_density(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                           const LevyModel& model, double lambda, double t);

/*
 * Generator of the mean dynamics evaluated on mu:
 *   -i/hbar [H, mu] + (q l^2 / 4) (H mu H - mu H^2/2 - H^2 mu/2)
 *   + integral (L(z) mu L(z) - L(z)^2 mu / 2 - mu L(z)^2 / 2) nu(dz),
 * with L(z) = e^{l H z / 2}. The jump integral is evaluated by quadrature
 * over the model's jump measure (atoms sum exactly), independently of the
 * closed-form psi.
 */
ComplexMatrix lindblad_rhs(const ComplexMatrix& mu, const EnergySpectrum& spectrum,
                           const LevyModel& model, double lambda);

// Classical RK4 integration of the mean dynamics, for cross-checking the
// closed-form decay. Returns the state at t_final.
ComplexMatrix integrate_lindblad(const DensityMatrix& rho0,
                                 const EnergySpectrum& spectrum,
                                 const LevyModel& model, double lambda,
                                 double t_final, int steps);

/*
 * Upper bound on the Brownian noise strength from an energy-superposition
 * clock that stays coherent over a Ramsey time: sigma^2 < 8 / (dE^2 T).
 * Input dE in eV and T in seconds; result in MeV^-2 s^-1.
 */
double clock_bound(double delta_e_ev, double ramsey_s);

// Proposed noise strength at which collapse would be gravitationally
// conditioned, for comparison against clock_bound outputs (MeV^-2 s^-1).
inline constexpr double kPlanckSigmaSquared = 2.8;

struct DecoherencePair {
  int m;
  int n;
  double e_m;
  double e_n;
  double gamma;
  double q_eff;
};

// All ordered level pairs m < n with their damping rates and curvatures.
std::vector<DecoherencePair> decoherence_table(const EnergySpectrum& spectrum,
                                               const LevyModel& model,
                                               double lambda);

// Smallest positive Gamma_mn over level pairs; the slowest damping scale.
double min_gamma_rate(const EnergySpectrum& spectrum, const LevyModel& model,
                      double lambda);

}  // namespace levycollapse
