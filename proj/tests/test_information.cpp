#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "levycollapse/errors.hpp"
#include "levycollapse/information.hpp"
#include "levycollapse/rng.hpp"
#include "levycollapse/stats.hpp"

namespace lc = levycollapse;

namespace {

std::vector<double> uniform_grid(double horizon, int steps) {
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        horizon * static_cast<double>(i) / static_cast<double>(steps);
  return grid;
}

}  // namespace

TEST(Signal, ValidatesItsFields) {
  EXPECT_NO_THROW(lc::Signal({0.0, 1.0}, {0.3, 0.7}, 1.0));
  EXPECT_THROW(lc::Signal({0.0, 1.0}, {0.3, 0.6}, 1.0), lc::InvalidState);
  EXPECT_THROW(lc::Signal({0.0, 1.0}, {-0.1, 1.1}, 1.0), lc::InvalidState);
  EXPECT_THROW(lc::Signal({0.0}, {0.5, 0.5}, 1.0), lc::DimensionMismatch);
  EXPECT_THROW(lc::Signal({}, {}, 1.0), lc::EmptySpectrum);

  const lc::Signal signal({0.0, 1.2}, {0.5, 0.5}, 1.0);
  EXPECT_DOUBLE_EQ(signal.coupling(1), 1.2);
  EXPECT_THROW(signal.energy(2), lc::IndexOutOfRange);
  EXPECT_NO_THROW(signal.validate_against(lc::LevyModel::poisson(1.0)));
  EXPECT_THROW(signal.validate_against(lc::LevyModel::gamma(1.0, 1.0)),
               lc::OutsideExponentDomain);
}

TEST(SampleOutcome, FollowsThePrior) {
  lc::PhiloxRng rng(26);
  const lc::Signal sure({0.0, 1.0}, {1.0, 0.0}, 1.0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(lc::sample_outcome(sure, rng), 0);

  const lc::Signal biased({0.0, 1.0}, {0.3, 0.7}, 1.0);
  constexpr int kDraws = 100000;
  int hits = 0;
  for (int i = 0; i < kDraws; ++i)
    if (lc::sample_outcome(biased, rng) == 1) ++hits;
  const double freq = static_cast<double>(hits) / kDraws;
  EXPECT_NEAR(freq, 0.7, 3.0 * std::sqrt(0.21 / kDraws));

  const lc::Signal uniform({0.0, 1.0, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.1);
  std::vector<std::size_t> counts(3, 0);
  for (int i = 0; i < 30000; ++i)
    ++counts[static_cast<std::size_t>(lc::sample_outcome(uniform, rng))];
  const std::vector<double> expected(3, 1.0 / 3);
  EXPECT_GT(lc::chi_squared_uniformity_pvalue(counts, expected),
            lc::thresholds::kDistributionP);
}

TEST(ConditionalExponent, FrozenValues) {
  const lc::LevyModel brown = lc::LevyModel::brownian(0.0, 1.0);
  for (double lh : {0.0, 0.5, 2.0}) {
    EXPECT_EQ(lc::conditional_exponent(brown, lh, 0.0), 0.0);
    for (double alpha : {-1.0, 0.7})
      EXPECT_NEAR(lc::conditional_exponent(brown, lh, alpha),
                  alpha * lh + 0.5 * alpha * alpha, 1e-12);
  }

  const lc::LevyModel poisson = lc::LevyModel::poisson(2.0);
  const double e = std::exp(1.0);
  EXPECT_NEAR(lc::conditional_exponent(poisson, 1.0, 1.0), 2.0 * e * (e - 1.0),
              1e-10);

  EXPECT_THROW(lc::conditional_exponent(lc::LevyModel::gamma(1.0, 1.0), 0.6, 0.6),
               lc::OutsideExponentDomain);
}

TEST(SampleInformationPath, GridAndShapeContracts) {
  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  const lc::Signal signal({0.0, 1.0}, {0.5, 0.5}, 0.5);
  lc::PhiloxRng rng(23);
  const std::vector<double> grid = uniform_grid(2.0, 8);

  const lc::InformationPath path =
      lc::sample_information_path(poisson, signal, 1, grid, rng);
  ASSERT_EQ(path.times.size(), grid.size());
  ASSERT_EQ(path.values.size(), grid.size());
  EXPECT_EQ(path.values.front(), 0.0);
  EXPECT_EQ(path.outcome, 1);
  for (std::size_t k = 1; k < path.values.size(); ++k)
    EXPECT_GE(path.values[k], path.values[k - 1]);

  EXPECT_THROW(lc::sample_information_path(poisson, signal, 5, grid, rng),
               lc::IndexOutOfRange);
  EXPECT_THROW(
      lc::sample_information_path(poisson, signal, 0, std::vector<double>{0.0}, rng),
      lc::BadGrid);
  EXPECT_THROW(lc::sample_information_path(poisson, signal, 0,
                                           std::vector<double>{0.5, 1.0}, rng),
               lc::BadGrid);
  EXPECT_THROW(lc::sample_information_path(poisson, signal, 0,
                                           std::vector<double>{0.0, 1.0, 1.0}, rng),
               lc::BadGrid);
}

TEST(SampleInformationPath, TiltedPoissonRate) {
  // Conditioning on coupling log 2 doubles the unit jump rate.
  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  const lc::Signal signal({0.0, 1.0}, {0.5, 0.5}, std::log(2.0));
  lc::PhiloxRng rng(25);
  const std::vector<double> grid = {0.0, 10.0};
  lc::RunningMoments counts;
  for (int i = 0; i < 500; ++i)
    counts.add(lc::sample_information_path(poisson, signal, 1, grid, rng)
                   .values.back());
  EXPECT_NEAR(counts.mean(), 20.0, 3.0 * std::sqrt(20.0 / 500.0));
}

TEST(SampleInformationPath, TiltedGammaScale) {
  // Conditioning on coupling 1/2 doubles the scale of unit gamma noise.
  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0);
  const lc::Signal signal({0.0, 0.5}, {0.5, 0.5}, 1.0);
  lc::PhiloxRng rng(27);
  const std::vector<double> grid = {0.0, 1.0};
  lc::RunningMoments mean;
  for (int i = 0; i < 100000; ++i)
    mean.add(lc::sample_information_path(gamma, signal, 1, grid, rng).values.back());
  EXPECT_NEAR(mean.mean(), 2.0, 4.0 * mean.standard_error());
}

TEST(InnovationsPath, ExactForConstantPosteriorEnergy) {
  lc::InformationPath path;
  path.times = {0.0, 0.5, 1.0, 2.0};
  path.values = {0.0, 0.4, 1.1, 1.7};
  path.outcome = 0;

  const lc::LevyModel unit = lc::LevyModel::brownian(0.0, 1.0);
  const std::vector<double> zero(path.times.size(), 0.0);
  const std::vector<double> w0 = lc::innovations_path(unit, path, zero, 1.0);
  for (std::size_t k = 0; k < w0.size(); ++k)
    EXPECT_NEAR(w0[k], path.values[k], 1e-14);

  const std::vector<double> constant(path.times.size(), 0.7);
  const std::vector<double> w1 = lc::innovations_path(unit, path, constant, 2.0);
  for (std::size_t k = 0; k < w1.size(); ++k)
    EXPECT_NEAR(w1[k], path.values[k] - 2.0 * 0.7 * path.times[k], 1e-12);

  // General drift and diffusion rescale the same trapezoid integral.
  const lc::LevyModel wide = lc::LevyModel::brownian(1.0, 4.0);
  const std::vector<double> w2 = lc::innovations_path(wide, path, constant, 0.5);
  for (std::size_t k = 0; k < w2.size(); ++k)
    EXPECT_NEAR(w2[k],
                (path.values[k] - path.times[k] - 2.0 * 0.5 * 0.7 * path.times[k]) /
                    2.0,
                1e-12);

  EXPECT_THROW(lc::innovations_path(lc::LevyModel::poisson(1.0), path, zero, 1.0),
               lc::WrongNoiseKind);
  const std::vector<double> short_series(2, 0.0);
  EXPECT_THROW(lc::innovations_path(unit, path, short_series, 1.0),
               lc::DimensionMismatch);
}
