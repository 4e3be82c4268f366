#include "levycollapse/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levycollapse/errors.hpp"

namespace levycollapse {

namespace {

// log(sum_j w_j e^{l_j}) with max subtraction; w_j >= 0, at least one > 0.
double log_sum_exp(std::span<const double> log_terms, std::span<const double> weights) {
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < log_terms.size(); ++j)
    if (weights[j] > 0.0) lmax = std::max(lmax, log_terms[j]);
  if (!std::isfinite(lmax)) throw AllWeightsZero("no positive weights");
  double sum = 0.0;
  for (std::size_t j = 0; j < log_terms.size(); ++j)
    if (weights[j] > 0.0) sum += weights[j] * std::exp(log_terms[j] - lmax);
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw DegenerateNormalization("normalization collapsed");
  return lmax + std::log(sum);
}

std::vector<double> posterior_from_weights(std::span<const double> couplings,
                                           std::span<const double> psi_values,
                                           std::span<const double> weights,
                                           double xi_t, double t) {
  const std::size_t n = couplings.size();
  std::vector<double> log_terms(n);
  for (std::size_t j = 0; j < n; ++j)
    log_terms[j] = couplings[j] * xi_t - psi_values[j] * t;
  const double log_z = log_sum_exp(log_terms, weights);
  std::vector<double> pi(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (weights[j] > 0.0) {
      pi[j] = weights[j] * std::exp(log_terms[j] - log_z);
      total += pi[j];
    }
  }
  // Normalize away the residual rounding of the log-space round trip.
  for (double& p : pi) p /= total;
  return pi;
}

double phase_angle(double energy_gap, double t, double hbar) {
  // Reduce (E_m - E_n) t / hbar modulo 2 pi before the trig call.
  return std::remainder(energy_gap * t / hbar, 2.0 * std::numbers::pi);
}

}  // namespace

std::vector<double> posterior_probabilities(const LevyModel& model,
                                            const Signal& signal, double xi_t,
                                            double t) {
  if (!(t >= 0.0)) throw NonpositiveTimestep("t must be >= 0");
  signal.validate_against(model);
  const std::size_t n = static_cast<std::size_t>(signal.size());
  std::vector<double> couplings(n);
  std::vector<double> psi_values(n);
  for (std::size_t j = 0; j < n; ++j) {
    couplings[j] = signal.coupling(static_cast<int>(j));
    psi_values[j] = model.psi(couplings[j]);
  }
  return posterior_from_weights(couplings, psi_values, signal.probabilities(), xi_t,
                                t);
}

ClosedFormEvolver::ClosedFormEvolver(const LevyModel& model, const Signal& signal,
                                     const DensityMatrix& rho0,
                                     const EnergySpectrum& spectrum)
    : levels_(spectrum.levels()),
      hbar_(spectrum.hbar()),
      phases_(spectrum.phases_enabled()),
      dim_(spectrum.dim()) {
  if (rho0.dim() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");
  if (signal.size() != spectrum.num_levels())
    throw DimensionMismatch("signal and spectrum level counts differ");
  signal.validate_against(model);

  const int n = spectrum.num_levels();
  couplings_.resize(static_cast<std::size_t>(n));
  psi_values_.resize(static_cast<std::size_t>(n));
  weights_.resize(static_cast<std::size_t>(n));
  blocks_.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    couplings_[j] = signal.coupling(j);
    psi_values_[j] = model.psi(couplings_[j]);
    weights_[j] = projector_probability(rho0, spectrum, j);
  }
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      blocks_.push_back(spectrum.projector(m) * rho0.matrix() *
                        spectrum.projector(k));
}

std::vector<double> ClosedFormEvolver::posteriors(double xi_t, double t) const {
  if (!(t >= 0.0)) throw NonpositiveTimestep("t must be >= 0");
  return posterior_from_weights(couplings_, psi_values_, weights_, xi_t, t);
}

ComplexMatrix ClosedFormEvolver::assemble(std::span<const double> pi,
                                          double t) const {
  const int n = num_levels();
  ComplexMatrix rho = ComplexMatrix::Zero(dim_, dim_);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      const double wm = weights_[static_cast<std::size_t>(m)];
      const double wk = weights_[static_cast<std::size_t>(k)];
      if (wm <= 0.0 || wk <= 0.0) continue;
      const double magnitude =
          std::sqrt(pi[static_cast<std::size_t>(m)] *
                    pi[static_cast<std::size_t>(k)] / (wm * wk));
      Complex coeff(magnitude, 0.0);
      if (phases_ && m != k) {
        const double theta = -phase_angle(levels_[m] - levels_[k], t, hbar_);
        coeff = magnitude * Complex(std::cos(theta), std::sin(theta));
      }
      rho += coeff * blocks_[static_cast<std::size_t>(m * n + k)];
    }
  }
  return rho;
}

DensityMatrix ClosedFormEvolver::density(double xi_t, double t) const {
  const std::vector<double> pi = posteriors(xi_t, t);
  return density_from_posteriors(pi, t);
}

DensityMatrix ClosedFormEvolver::density_from_posteriors(std::span<const double> pi,
                                                         double t) const {
  if (pi.size() != static_cast<std::size_t>(num_levels()))
    throw DimensionMismatch("posterior count differs from level count");
  ComplexMatrix rho = assemble(pi, t);
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(std::move(rho));
}

DensityMatrix evolve_density(const LevyModel& model, const Signal& signal,
                             const DensityMatrix& rho0,
                             const EnergySpectrum& spectrum, double xi_t, double t) {
  return ClosedFormEvolver(model, signal, rho0, spectrum).density(xi_t, t);
}

PureState evolve_state_vector(const LevyModel& model, const Signal& signal,
                              const PureState& psi0, const EnergySpectrum& spectrum,
                              double xi_t, double t) {
  if (psi0.dim() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");
  const DensityMatrix rho0 = DensityMatrix::pure(psi0);
  const ClosedFormEvolver evolver(model, signal, rho0, spectrum);
  const std::vector<double> pi = evolver.posteriors(xi_t, t);

  ComplexVector psi = ComplexVector::Zero(spectrum.dim());
  for (int j = 0; j < spectrum.num_levels(); ++j) {
    const double pj = evolver.weight(j);
    if (pj <= 0.0) continue;
    Complex coeff(std::sqrt(pi[static_cast<std::size_t>(j)] / pj), 0.0);
    if (spectrum.phases_enabled()) {
      const double theta = -phase_angle(spectrum.level(j), t, spectrum.hbar());
      coeff *= Complex(std::cos(theta), std::sin(theta));
    }
    psi += coeff * (spectrum.projector(j) * psi0.vector());
  }
  psi.normalize();
  return PureState(std::move(psi));
}

namespace {

void check_em_inputs(std::span<const double> grid, std::span<const double> dw) {
  if (grid.size() < 2) throw BadGrid("grid needs at least two points");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw BadGrid("grid must be strictly increasing");
  if (dw.size() + 1 != grid.size())
    throw DimensionMismatch("need one noise increment per grid step");
}

}  // namespace

std::vector<ComplexVector> euler_maruyama_vector(const EnergySpectrum& spectrum,
                                                 const ComplexVector& psi0,
                                                 double sigma,
                                                 std::span<const double> grid,
                                                 std::span<const double> dw) {
  check_em_inputs(grid, dw);
  if (psi0.size() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");

  const ComplexMatrix h = spectrum.hamiltonian();
  const bool phases = spectrum.phases_enabled();
  const Complex unit_i(0.0, 1.0);

  std::vector<ComplexVector> out;
  out.reserve(grid.size());
  ComplexVector psi = psi0.normalized();
  out.push_back(psi);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    const ComplexVector h_psi = h * psi;
    const ComplexVector h2_psi = h * h_psi;
    const double mean_h = std::real(psi.dot(h_psi));
    // (H - h)^2 psi expanded through the two matrix-vector products.
    const ComplexVector centered2 =
        h2_psi - 2.0 * mean_h * h_psi + mean_h * mean_h * psi;
    const ComplexVector centered = h_psi - mean_h * psi;

    ComplexVector next = psi - 0.125 * sigma * sigma * dt * centered2 +
                         0.5 * sigma * dw[k] * centered;
    if (phases) next -= unit_i / spectrum.hbar() * dt * h_psi;
    const double norm = next.norm();
    if (norm < 1e-12) throw StepUnstable("state norm vanished");
    psi = next / norm;
    out.push_back(psi);
  }
  return out;
}

std::vector<ComplexMatrix> euler_maruyama_density(const EnergySpectrum& spectrum,
                                                  const ComplexMatrix& rho0,
                                                  double sigma,
                                                  std::span<const double> grid,
                                                  std::span<const double> dw) {
  check_em_inputs(grid, dw);
  if (rho0.rows() != spectrum.dim() || rho0.cols() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");

  const ComplexMatrix h = spectrum.hamiltonian();
  const ComplexMatrix h2 = h * h;
  const bool phases = spectrum.phases_enabled();
  const Complex unit_i(0.0, 1.0);

  std::vector<ComplexMatrix> out;
  out.reserve(grid.size());
  ComplexMatrix rho = rho0 / rho0.trace().real();
  out.push_back(rho);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    const double mean_h = (h * rho).trace().real();
    ComplexMatrix next = rho +
                         0.25 * sigma * sigma * dt *
                             (h * rho * h - 0.5 * rho * h2 - 0.5 * h2 * rho) +
                         0.5 * sigma * dw[k] *
                             ((h * rho + rho * h) - 2.0 * mean_h * rho);
    if (phases) next -= unit_i / spectrum.hbar() * dt * (h * rho - rho * h);
    next = 0.5 * (next + next.adjoint().eval());
    const double trace = next.trace().real();
    if (!(trace > 1e-12)) throw StepUnstable("trace vanished");
    next /= trace;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(next,
                                                        Eigen::EigenvaluesOnly);
    // The explicit scheme dips below zero by O(dt) near a collapsed state;
    // only excursions far beyond that discretization scale are genuine
    // instability.
    if (solver.eigenvalues().minCoeff() < -std::max(100.0 * dt, 1e-6))
      throw StepUnstable("positivity violated beyond tolerance");
    rho = std::move(next);
    out.push_back(rho);
  }
  return out;
}

std::optional<int> detect_collapse(std::span<const double> posteriors, double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("delta must be in (0, 1/2)");
  for (std::size_t j = 0; j < posteriors.size(); ++j)
    if (posteriors[j] > 1.0 - delta) return static_cast<int>(j);
  return std::nullopt;
}

}  // namespace levycollapse
