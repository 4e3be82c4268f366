#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace levycollapse {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

class PureState;

/*
 * Finite nondegenerate-or-clustered energy spectrum: strictly increasing
 * levels E_1 < ... < E_n with orthogonal projectors summing to the
 * identity. hbar scales the unitary phase; an infinite hbar switches the
 * phase rotation off entirely.
 */
class EnergySpectrum {
public:
  EnergySpectrum(std::vector<double> levels, std::vector<ComplexMatrix> projectors,
                 double hbar = 1.0);

  // Diagonalizes a dense Hermitian matrix and clusters eigenvalues closer
  // than degeneracy_tol into a single level (negative tol selects the
  // default 1e-9 * spectral range).
  static EnergySpectrum from_dense(const ComplexMatrix& hamiltonian,
                                   double degeneracy_tol = -1.0,
                                   double hbar = 1.0);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  Eigen::Index dim() const { return projectors_.front().rows(); }
  double level(int j) const;
  const std::vector<double>& levels() const { return levels_; }
  const ComplexMatrix& projector(int j) const;
  double hbar() const { return hbar_; }
  bool phases_enabled() const;

  // Reassembled operator sum_j E_j P_j.
  ComplexMatrix hamiltonian() const;
  double min_gap() const;     // smallest |E_m - E_n| over m != n
  double spectral_range() const { return levels_.back() - levels_.front(); }

private:
  std::vector<double> levels_;
  std::vector<ComplexMatrix> projectors_;
  double hbar_;
};

// Unit vector in the system Hilbert space.
class PureState {
public:
  explicit PureState(ComplexVector amplitudes);
  const ComplexVector& vector() const { return psi_; }
  Eigen::Index dim() const { return psi_.size(); }

private:
  ComplexVector psi_;
};

// Hermitian, unit-trace, positive semidefinite operator. Eigenvalues in
// [-1e-10, 0) are treated as zero by validation; anything lower rejects.
class DensityMatrix {
public:
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const PureState& psi);
  const ComplexMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  double purity() const;  // tr rho^2

private:
  ComplexMatrix rho_;
};

double expectation_energy(const DensityMatrix& rho, const EnergySpectrum& spectrum);
double variance_energy(const DensityMatrix& rho, const EnergySpectrum& spectrum);
double third_central_moment(const DensityMatrix& rho, const EnergySpectrum& spectrum);

// tr(P_j rho), the occupation probability of level j.
double projector_probability(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                             int j);
std::vector<double> level_probabilities(const DensityMatrix& rho,
                                        const EnergySpectrum& spectrum);

// Projection postulate: P_j rho P_j / tr(P_j rho).
DensityMatrix luders_state(const DensityMatrix& rho, const EnergySpectrum& spectrum,
                           int j);

// (1/2) ||a - b||_1 via the eigenvalues of the difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace levycollapse
