#include "levycollapse/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levycollapse/errors.hpp"

namespace levycollapse {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kProjectorTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kEigenvalueFloor = -1e-10;

void check_hermitian(const ComplexMatrix& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
    throw NonHermitianInput(std::string(what) + " is not Hermitian");
}

}  // namespace

EnergySpectrum::EnergySpectrum(std::vector<double> levels,
                               std::vector<ComplexMatrix> projectors, double hbar)
    : levels_(std::move(levels)), projectors_(std::move(projectors)), hbar_(hbar) {
  if (levels_.empty()) throw EmptySpectrum("spectrum has no levels");
  if (levels_.size() != projectors_.size())
    throw DimensionMismatch("levels and projectors differ in count");
  if (!(hbar_ > 0.0)) throw NonpositiveInput("hbar must be positive");
  const Eigen::Index d = projectors_.front().rows();
  if (d == 0) throw EmptySpectrum("zero-dimensional projectors");
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < levels_.size(); ++j) {
    const ComplexMatrix& p = projectors_[j];
    if (p.rows() != d || p.cols() != d)
      throw DimensionMismatch("projector dimensions differ");
    check_hermitian(p, "projector");
    if ((p * p - p).cwiseAbs().maxCoeff() > kProjectorTol)
      throw InvalidState("projector is not idempotent");
    if (j + 1 < levels_.size() && !(levels_[j] < levels_[j + 1]))
      throw InvalidState("levels must be strictly increasing");
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kProjectorTol)
    throw InvalidState("projectors do not resolve the identity");
}

EnergySpectrum EnergySpectrum::from_dense(const ComplexMatrix& hamiltonian,
                                          double degeneracy_tol, double hbar) {
  if (hamiltonian.rows() == 0) throw EmptySpectrum("empty operator");
  if (hamiltonian.rows() != hamiltonian.cols())
    throw DimensionMismatch("operator is not square");
  check_hermitian(hamiltonian, "operator");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw InvalidState("eigendecomposition failed");
  const Eigen::VectorXd evals = solver.eigenvalues();
  const ComplexMatrix evecs = solver.eigenvectors();

  const double range = evals(evals.size() - 1) - evals(0);
  const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-9 * range;

  std::vector<double> levels;
  std::vector<ComplexMatrix> projectors;
  const Eigen::Index d = hamiltonian.rows();
  Eigen::Index i = 0;
  while (i < d) {
    Eigen::Index k = i + 1;
    while (k < d && evals(k) - evals(k - 1) <= tol) ++k;
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    double mean = 0.0;
    for (Eigen::Index col = i; col < k; ++col) {
      p += evecs.col(col) * evecs.col(col).adjoint();
      mean += evals(col);
    }
    levels.push_back(mean / static_cast<double>(k - i));
    projectors.push_back(std::move(p));
    i = k;
  }
  return EnergySpectrum(std::move(levels), std::move(projectors), hbar);
}

double EnergySpectrum::level(int j) const {
  if (j < 0 || j >= num_levels()) throw IndexOutOfRange("level index");
  return levels_[static_cast<std::size_t>(j)];
}

const ComplexMatrix& EnergySpectrum::projector(int j) const {
  if (j < 0 || j >= num_levels()) throw IndexOutOfRange("projector index");
  return projectors_[static_cast<std::size_t>(j)];
}

bool EnergySpectrum::phases_enabled() const { return std::isfinite(hbar_); }

ComplexMatrix EnergySpectrum::hamiltonian() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim(), dim());
  for (int j = 0; j < num_levels(); ++j) h += levels_[j] * projectors_[j];
  return h;
}

double EnergySpectrum::min_gap() const {
  if (num_levels() < 2) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < levels_.size(); ++j)
    gap = std::min(gap, levels_[j] - levels_[j - 1]);
  return gap;
}

PureState::PureState(ComplexVector amplitudes) : psi_(std::move(amplitudes)) {
  if (psi_.size() == 0) throw InvalidState("empty state vector");
  if (std::abs(psi_.norm() - 1.0) > 1e-12)
    throw InvalidState("state vector is not normalized");
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
    throw DimensionMismatch("density matrix is not square");
  check_hermitian(rho_, "density matrix");
  if (std::abs(rho_.trace().real() - 1.0) > kTraceTol ||
      std::abs(rho_.trace().imag()) > kTraceTol)
    throw InvalidState("density matrix trace is not one");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_,
                                                      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw InvalidState("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(psi.vector() * psi.vector().adjoint());
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

namespace {

void check_dims(const DensityMatrix& rho, const EnergySpectrum& spectrum) {
  if (rho.dim() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");
}

}  // namespace

double expectation_energy(const DensityMatrix& rho, const EnergySpectrum& spectrum) {
  check_dims(rho, spectrum);
  double sum = 0.0;
  for (int j = 0; j < spectrum.num_levels(); ++j)
    sum += spectrum.level(j) * projector_probability(rho, spectrum, j);
  return sum;
}

double variance_energy(const DensityMatrix& rho, const EnergySpectrum& spectrum) {
  check_dims(rho, spectrum);
  double m1 = 0.0;
  double m2 = 0.0;
  for (int j = 0; j < spectrum.num_levels(); ++j) {
    const double p = projector_probability(rho, spectrum, j);
    m1 += spectrum.level(j) * p;
    m2 += spectrum.level(j) * spectrum.level(j) * p;
  }
  return std::max(0.0, m2 - m1 * m1);
}

double third_central_moment(const DensityMatrix& rho, const EnergySpectrum& spectrum) {
  check_dims(rho, spectrum);
  const double m1 = expectation_energy(rho, spectrum);
  double sum = 0.0;
  for (int j = 0; j < spectrum.num_levels(); ++j) {
    const double d = spectrum.level(j) - m1;
    sum += d * d * d * projector_probability(rho, spectrum, j);
  }
  return sum;
}

double projector_probability(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                             int j) {
  check_dims(rho, spectrum);
  const double p = (spectrum.projector(j) * rho.matrix()).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> level_probabilities(const DensityMatrix& rho,
                                        const EnergySpectrum& spectrum) {
  std::vector<double> probs(static_cast<std::size_t>(spectrum.num_levels()));
  for (int j = 0; j < spectrum.num_levels(); ++j)
    probs[static_cast<std::size_t>(j)] = projector_probability(rho, spectrum, j);
  return probs;
}

DensityMatrix luders_state(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                           int j) {
  check_dims(rho, spectrum);
  const ComplexMatrix& p = spectrum.projector(j);
  const double weight = (p * rho.matrix()).trace().real();
  if (weight <= 1e-14)
    throw ZeroProbabilityBranch("branch has zero occupation probability");
  ComplexMatrix projected = p * rho.matrix() * p / weight;
  // Symmetrize away roundoff before revalidating.
  projected = 0.5 * (projected + projected.adjoint().eval());
  return DensityMatrix(std::move(projected));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("trace distance needs equal dimensions");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix() - b.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace levycollapse
