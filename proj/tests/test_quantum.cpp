#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "levycollapse/errors.hpp"
#include "levycollapse/quantum.hpp"

namespace lc = levycollapse;

namespace {

lc::EnergySpectrum diag_spectrum(std::vector<double> levels) {
  const auto n = static_cast<Eigen::Index>(levels.size());
  std::vector<lc::ComplexMatrix> projectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    lc::ComplexMatrix p = lc::ComplexMatrix::Zero(n, n);
    p(j, j) = 1.0;
    projectors.push_back(p);
  }
  return lc::EnergySpectrum(std::move(levels), std::move(projectors));
}

lc::DensityMatrix diag_state(std::vector<double> probs) {
  const auto n = static_cast<Eigen::Index>(probs.size());
  lc::ComplexMatrix rho = lc::ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) rho(j, j) = probs[static_cast<std::size_t>(j)];
  return lc::DensityMatrix(rho);
}

}  // namespace

TEST(SpectrumFromDense, ClustersRepeatedEigenvalues) {
  lc::ComplexMatrix h = lc::ComplexMatrix::Zero(3, 3);
  h(2, 2) = 2.0;
  const lc::EnergySpectrum spec = lc::EnergySpectrum::from_dense(h, 1e-9);
  ASSERT_EQ(spec.num_levels(), 2);
  EXPECT_DOUBLE_EQ(spec.level(0), 0.0);
  EXPECT_DOUBLE_EQ(spec.level(1), 2.0);
  lc::ComplexMatrix p0 = lc::ComplexMatrix::Zero(3, 3);
  p0(0, 0) = 1.0;
  p0(1, 1) = 1.0;
  EXPECT_LT((spec.projector(0) - p0).norm(), 1e-12);
  EXPECT_LT((spec.projector(1) - (lc::ComplexMatrix::Identity(3, 3) - p0)).norm(),
            1e-12);
}

TEST(SpectrumFromDense, ScaledIdentityIsOneLevel) {
  const lc::ComplexMatrix h = 5.0 * lc::ComplexMatrix::Identity(3, 3);
  const lc::EnergySpectrum spec = lc::EnergySpectrum::from_dense(h);
  ASSERT_EQ(spec.num_levels(), 1);
  EXPECT_DOUBLE_EQ(spec.level(0), 5.0);
  EXPECT_LT((spec.projector(0) - lc::ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(SpectrumFromDense, SpinFlipOperator) {
  lc::ComplexMatrix h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  const lc::EnergySpectrum spec = lc::EnergySpectrum::from_dense(h);
  ASSERT_EQ(spec.num_levels(), 2);
  EXPECT_NEAR(spec.level(0), -1.0, 1e-12);
  EXPECT_NEAR(spec.level(1), 1.0, 1e-12);
  lc::ComplexMatrix minus(2, 2), plus(2, 2);
  minus << 0.5, -0.5, -0.5, 0.5;
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LT((spec.projector(0) - minus).norm(), 1e-12);
  EXPECT_LT((spec.projector(1) - plus).norm(), 1e-12);
  EXPECT_LT((spec.hamiltonian() - h).norm(), 1e-8);
}

TEST(SpectrumFromDense, RejectsBadInput) {
  lc::ComplexMatrix h(2, 2);
  h << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(lc::EnergySpectrum::from_dense(h), lc::NonHermitianInput);
  EXPECT_THROW(lc::EnergySpectrum::from_dense(lc::ComplexMatrix()),
               lc::EmptySpectrum);
  EXPECT_THROW(lc::EnergySpectrum({}, {}), lc::EmptySpectrum);
}

TEST(SpectrumInvariants, GapAndRange) {
  const lc::EnergySpectrum spec = diag_spectrum({0.0, 0.3, 1.0});
  EXPECT_DOUBLE_EQ(spec.min_gap(), 0.3);
  EXPECT_DOUBLE_EQ(spec.spectral_range(), 1.0);
}

TEST(ExpectationEnergy, FrozenValues) {
  const lc::EnergySpectrum two = diag_spectrum({0.0, 2.0});
  EXPECT_NEAR(lc::expectation_energy(diag_state({1.0, 0.0}), two), 0.0, 1e-12);
  EXPECT_NEAR(lc::expectation_energy(diag_state({0.5, 0.5}), two), 1.0, 1e-12);
  const lc::EnergySpectrum unit = diag_spectrum({0.0, 1.0});
  EXPECT_NEAR(lc::expectation_energy(diag_state({0.3, 0.7}), unit), 0.7, 1e-12);
}

TEST(ExpectationEnergy, RejectsDimensionMismatch) {
  EXPECT_THROW(
      lc::expectation_energy(diag_state({0.5, 0.5}), diag_spectrum({0.0, 1.0, 2.0})),
      lc::DimensionMismatch);
}

TEST(VarianceEnergy, FrozenValues) {
  const lc::EnergySpectrum two = diag_spectrum({0.0, 2.0});
  EXPECT_NEAR(lc::variance_energy(diag_state({0.0, 1.0}), two), 0.0, 1e-12);
  EXPECT_NEAR(lc::variance_energy(diag_state({0.5, 0.5}), two), 1.0, 1e-12);
  const lc::EnergySpectrum three = diag_spectrum({0.0, 1.0, 2.0});
  const double third = 1.0 / 3.0;
  EXPECT_NEAR(lc::variance_energy(diag_state({third, third, third}), three),
              2.0 / 3.0, 1e-12);
}

TEST(ThirdCentralMoment, FrozenValues) {
  const lc::EnergySpectrum two = diag_spectrum({0.0, 2.0});
  EXPECT_NEAR(lc::third_central_moment(diag_state({1.0, 0.0}), two), 0.0, 1e-12);
  EXPECT_NEAR(lc::third_central_moment(diag_state({0.5, 0.5}), two), 0.0, 1e-12);
  const lc::EnergySpectrum unit = diag_spectrum({0.0, 1.0});
  EXPECT_NEAR(lc::third_central_moment(diag_state({0.25, 0.75}), unit), -0.09375,
              1e-12);
}

TEST(ProjectorProbability, FrozenValues) {
  const lc::EnergySpectrum unit = diag_spectrum({0.0, 1.0});
  EXPECT_NEAR(lc::projector_probability(diag_state({1.0, 0.0}), unit, 0), 1.0, 1e-12);
  EXPECT_NEAR(lc::projector_probability(diag_state({0.3, 0.7}), unit, 1), 0.7, 1e-12);

  lc::ComplexMatrix p0 = lc::ComplexMatrix::Zero(4, 4);
  p0(0, 0) = 1.0;
  p0(1, 1) = 1.0;
  const lc::EnergySpectrum wide(
      {0.0, 1.0}, {p0, lc::ComplexMatrix::Identity(4, 4) - p0});
  const lc::DensityMatrix mixed(0.25 * lc::ComplexMatrix::Identity(4, 4));
  EXPECT_NEAR(lc::projector_probability(mixed, wide, 0), 0.5, 1e-12);

  EXPECT_THROW(lc::projector_probability(mixed, wide, 2), lc::IndexOutOfRange);
  EXPECT_THROW(lc::projector_probability(mixed, wide, -1), lc::IndexOutOfRange);
}

TEST(LevelProbabilities, SumToOne) {
  const lc::EnergySpectrum three = diag_spectrum({0.0, 1.0, 2.0});
  const std::vector<double> probs =
      lc::level_probabilities(diag_state({0.2, 0.5, 0.3}), three);
  ASSERT_EQ(probs.size(), 3u);
  double sum = 0.0;
  for (double p : probs) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_NEAR(probs[1], 0.5, 1e-12);
}

TEST(LudersState, ProjectionPostulate) {
  const lc::EnergySpectrum unit = diag_spectrum({0.0, 1.0});

  const lc::DensityMatrix eigen = diag_state({0.0, 1.0});
  EXPECT_NEAR(lc::trace_distance(lc::luders_state(eigen, unit, 1), eigen), 0.0,
              1e-12);

  lc::ComplexVector v(2);
  v << std::sqrt(0.5), std::sqrt(0.5);
  const lc::DensityMatrix super = lc::DensityMatrix::pure(lc::PureState(v));
  const lc::DensityMatrix projected = lc::luders_state(super, unit, 0);
  EXPECT_NEAR(lc::trace_distance(projected, diag_state({1.0, 0.0})), 0.0, 1e-10);
  EXPECT_NEAR(lc::expectation_energy(projected, unit), unit.level(0), 1e-10);
  EXPECT_NEAR(lc::variance_energy(projected, unit), 0.0, 1e-10);
}

TEST(LudersState, KeepsIntraEigenspaceStructure) {
  lc::ComplexMatrix p0 = lc::ComplexMatrix::Zero(3, 3);
  p0(0, 0) = 1.0;
  p0(1, 1) = 1.0;
  const lc::EnergySpectrum spec(
      {0.0, 1.0}, {p0, lc::ComplexMatrix::Identity(3, 3) - p0});
  const lc::DensityMatrix mixed(lc::ComplexMatrix::Identity(3, 3) / 3.0);
  const lc::DensityMatrix projected = lc::luders_state(mixed, spec, 0);
  EXPECT_NEAR(lc::trace_distance(projected, diag_state({0.5, 0.5, 0.0})), 0.0, 1e-10);
}

TEST(LudersState, RejectsEmptyBranch) {
  const lc::EnergySpectrum unit = diag_spectrum({0.0, 1.0});
  EXPECT_THROW(lc::luders_state(diag_state({0.0, 1.0}), unit, 0),
               lc::ZeroProbabilityBranch);
}

TEST(TraceDistance, FrozenValues) {
  const lc::DensityMatrix ground = diag_state({1.0, 0.0});
  const lc::DensityMatrix excited = diag_state({0.0, 1.0});
  EXPECT_NEAR(lc::trace_distance(ground, excited), 1.0, 1e-12);
  EXPECT_NEAR(lc::trace_distance(ground, ground), 0.0, 1e-12);

  lc::ComplexVector v(2);
  v << std::sqrt(0.5), std::sqrt(0.5);
  const lc::DensityMatrix super = lc::DensityMatrix::pure(lc::PureState(v));
  EXPECT_NEAR(lc::trace_distance(super, diag_state({0.5, 0.5})), 0.5, 1e-12);
}

TEST(StateValidation, RejectsMalformedStates) {
  EXPECT_THROW(lc::DensityMatrix(2.0 * lc::ComplexMatrix::Identity(2, 2)),
               lc::InvalidState);
  lc::ComplexMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW((lc::DensityMatrix(neg)), lc::InvalidState);
  lc::ComplexVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW((lc::PureState(v)), lc::InvalidState);
}

TEST(StateValidation, PurityOfPureAndMixed) {
  lc::ComplexVector v(2);
  v << std::sqrt(0.3), std::sqrt(0.7);
  EXPECT_NEAR(lc::DensityMatrix::pure(lc::PureState(v)).purity(), 1.0, 1e-12);
  EXPECT_NEAR(diag_state({0.5, 0.5}).purity(), 0.5, 1e-12);
}
