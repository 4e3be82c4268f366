#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "levycollapse/errors.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/rng.hpp"
#include "levycollapse/stats.hpp"

namespace lc = levycollapse;

namespace {

std::vector<lc::LevyModel> all_kinds() {
  return {lc::LevyModel::brownian(0.2, 1.0), lc::LevyModel::poisson(1.0),
          lc::LevyModel::compound_poisson_exp(1.0, 2.0),
          lc::LevyModel::gamma(1.0, 1.0)};
}

}  // namespace

TEST(Exponent, VanishesAtZero) {
  for (const lc::LevyModel& model : all_kinds()) EXPECT_EQ(model.psi(0.0), 0.0);
}

TEST(Exponent, FrozenClosedFormValues) {
  const lc::LevyModel brown = lc::LevyModel::brownian(1.0, 2.0);
  EXPECT_NEAR(brown.psi(2.0), 6.0, 1e-12);
  EXPECT_NEAR(brown.psi_prime(1.0), 3.0, 1e-12);
  EXPECT_NEAR(brown.psi_double_prime(0.7), 2.0, 1e-12);

  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  EXPECT_NEAR(poisson.psi(std::log(2.0)), 1.0, 1e-12);
  EXPECT_NEAR(poisson.psi_prime(0.0), 1.0, 1e-12);
  EXPECT_NEAR(poisson.psi_double_prime(std::log(2.0)), 2.0, 1e-12);

  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0);
  EXPECT_NEAR(gamma.psi(0.5), std::log(2.0), 1e-12);
  EXPECT_NEAR(gamma.psi_double_prime(0.0), 1.0, 1e-12);

  const lc::LevyModel cpe = lc::LevyModel::compound_poisson_exp(1.0, 2.0);
  EXPECT_NEAR(cpe.psi(1.0), 1.0, 1e-12);
  EXPECT_NEAR(cpe.psi_prime(1.0), 2.0, 1e-12);
}

TEST(Exponent, OpenDomainBoundaries) {
  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0);
  EXPECT_EQ(gamma.domain_sup(), 1.0);
  EXPECT_TRUE(gamma.in_domain(0.999));
  EXPECT_FALSE(gamma.in_domain(1.0));
  EXPECT_THROW(gamma.psi(1.0), lc::OutsideExponentDomain);

  const lc::LevyModel cpe = lc::LevyModel::compound_poisson_exp(1.0, 2.0);
  EXPECT_EQ(cpe.domain_sup(), 2.0);
  EXPECT_THROW(cpe.psi(2.0), lc::OutsideExponentDomain);
  EXPECT_THROW(cpe.psi_prime(2.5), lc::OutsideExponentDomain);

  EXPECT_NO_THROW(lc::LevyModel::brownian(0.0, 1.0).psi(1e3));
  EXPECT_NO_THROW(lc::LevyModel::poisson(1.0).psi(1e2));
}

TEST(Exponent, KindNamesRoundTrip) {
  for (const lc::LevyModel& model : all_kinds()) {
    EXPECT_EQ(lc::noise_kind_from_string(lc::to_string(model.kind())), model.kind());
  }
  EXPECT_THROW(lc::noise_kind_from_string("cauchy"), lc::Error);
  EXPECT_EQ(lc::LevyModel::brownian(0.0, 1.0).monotone_paths(), false);
  EXPECT_EQ(lc::LevyModel::poisson(1.0).monotone_paths(), true);
}

TEST(LevyKhintchine, MatchesClosedFormExponent) {
  EXPECT_NEAR(lc::levy_khintchine_value(lc::LevyModel::brownian(0.0, 1.0), 2.0), 2.0,
              1e-12);
  const lc::LevyMeasureSpec atom = lc::LevyMeasureSpec::atomic({{1.0, 3.0}});
  EXPECT_EQ(lc::levy_khintchine_value(0.0, 0.0, atom, 0.0), 0.0);

  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0);
  const double via_triplet =
      lc::levy_khintchine_value(gamma.triplet_drift(), gamma.triplet_diffusion(),
                                gamma.jump_measure(), 0.5);
  EXPECT_NEAR(via_triplet / std::log(2.0), 1.0, 1e-8);

  for (const lc::LevyModel& model : all_kinds()) {
    for (double alpha : {-0.5, 0.3}) {
      const double direct = model.psi(alpha);
      const double rebuilt = lc::levy_khintchine_value(model, alpha);
      EXPECT_NEAR(rebuilt, direct, 1e-8 * std::max(1.0, std::abs(direct)))
          << lc::to_string(model.kind()) << " alpha " << alpha;
    }
  }
}

TEST(LevyMeasure, RejectsMalformedSpecs) {
  EXPECT_THROW(lc::LevyMeasureSpec::atomic({{0.0, 1.0}}), lc::InvalidLevyMeasure);
  EXPECT_THROW(lc::LevyMeasureSpec::atomic({{1.0, -2.0}}), lc::InvalidLevyMeasure);
}

TEST(EsscherTilt, ClosedUnderTilting) {
  const lc::LevyModel brown = lc::LevyModel::brownian(1.0, 2.0).esscher_tilt(0.5);
  EXPECT_EQ(brown.kind(), lc::NoiseKind::Brownian);
  EXPECT_NEAR(brown.drift(), 2.0, 1e-12);
  EXPECT_NEAR(brown.diffusion(), 2.0, 1e-12);

  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0).esscher_tilt(std::log(3.0));
  EXPECT_NEAR(poisson.intensity(), 3.0, 1e-12);

  const lc::LevyModel cpe =
      lc::LevyModel::compound_poisson_exp(1.0, 2.0).esscher_tilt(1.0);
  EXPECT_NEAR(cpe.intensity(), 2.0, 1e-12);
  EXPECT_NEAR(cpe.jump_rate(), 1.0, 1e-12);

  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0).esscher_tilt(0.5);
  EXPECT_NEAR(gamma.intensity(), 1.0, 1e-12);
  EXPECT_NEAR(gamma.scale(), 2.0, 1e-12);

  EXPECT_THROW(lc::LevyModel::gamma(1.0, 1.0).esscher_tilt(1.2),
               lc::OutsideExponentDomain);
}

TEST(EsscherTilt, ShiftsTheExponent) {
  for (const lc::LevyModel& model : all_kinds()) {
    const double kappa = 0.3;
    const lc::LevyModel tilted = model.esscher_tilt(kappa);
    for (double alpha : {-0.4, 0.2, 0.5}) {
      EXPECT_NEAR(tilted.psi(alpha), model.psi(alpha + kappa) - model.psi(kappa),
                  1e-10)
          << lc::to_string(model.kind());
    }
  }
}

TEST(SampleIncrement, FrozenMomentChecks) {
  constexpr std::size_t kDraws = 100000;

  lc::PhiloxRng rng(7);
  const lc::LevyModel gamma = lc::LevyModel::gamma(2.0, 1.0);
  lc::RunningMoments gamma_moments;
  for (std::size_t i = 0; i < kDraws; ++i)
    gamma_moments.add(gamma.sample_increment(1.0, rng));
  EXPECT_NEAR(gamma_moments.mean(), 2.0, 3.0 * gamma_moments.standard_error());

  lc::PhiloxRng rng2(8);
  const lc::LevyModel brown = lc::LevyModel::brownian(0.0, 4.0);
  lc::RunningMoments brown_moments;
  for (std::size_t i = 0; i < kDraws; ++i)
    brown_moments.add(brown.sample_increment(0.25, rng2));
  const double var_se = brown_moments.variance() *
                        std::sqrt(2.0 / static_cast<double>(kDraws - 1));
  EXPECT_NEAR(brown_moments.variance(), 1.0, 3.0 * var_se);
}

TEST(SampleIncrement, CountsAreNonnegativeIntegers) {
  lc::PhiloxRng rng(9);
  const lc::LevyModel poisson = lc::LevyModel::poisson(1.5);
  for (int i = 0; i < 1000; ++i) {
    const double x = poisson.sample_increment(0.5, rng);
    EXPECT_GE(x, 0.0);
    EXPECT_EQ(x, std::floor(x));
  }
  EXPECT_THROW(poisson.sample_increment(0.0, rng), lc::NonpositiveTimestep);
  EXPECT_THROW(poisson.sample_increment(-1.0, rng), lc::NonpositiveTimestep);
}

TEST(ExponentialMartingale, FrozenValues) {
  for (const lc::LevyModel& model : all_kinds())
    EXPECT_EQ(lc::exponential_martingale(model, 0.0, 123.0, 45.0), 1.0);

  // Unit-rate, unit-scale gamma noise at kappa = 1/2 and xi = log 4:
  // the weight is 2^(1 - t).
  const lc::LevyModel gamma = lc::LevyModel::gamma(1.0, 1.0);
  EXPECT_NEAR(lc::exponential_martingale(gamma, 0.5, std::log(4.0), 1.0), 1.0,
              1e-12);
  EXPECT_NEAR(lc::exponential_martingale(gamma, 0.5, std::log(4.0), 0.5),
              std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(lc::log_exponential_martingale(gamma, 0.5, std::log(4.0), 0.5),
              0.5 * std::log(2.0), 1e-12);
}

TEST(ExponentialMartingale, UnitMeanUnderTheBaseLaw) {
  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  lc::PhiloxRng rng(11);
  lc::RunningMoments mean;
  for (int i = 0; i < 100000; ++i) {
    const double xi = poisson.sample_increment(2.0, rng);
    mean.add(lc::exponential_martingale(poisson, 0.5, xi, 2.0));
  }
  EXPECT_NEAR(mean.mean(), 1.0, 3.0 * mean.standard_error());
}

TEST(CantelliBound, FrozenValues) {
  const lc::LevyModel brown = lc::LevyModel::brownian(0.0, 1.0);
  EXPECT_EQ(lc::cantelli_bound(brown, 1.0, 0.01, 1.0), 1.0);
  EXPECT_LT(lc::cantelli_bound(brown, 1.0, 0.01, 1e6), 1e-3);
  {
    const double x = std::log(0.01) + 0.5 * 25.0;
    EXPECT_NEAR(lc::cantelli_bound(brown, 1.0, 0.01, 25.0), 25.0 / (25.0 + x * x),
                1e-12);
  }

  const lc::LevyModel poisson = lc::LevyModel::poisson(1.0);
  EXPECT_EQ(lc::cantelli_bound(poisson, 0.7, 0.1, 1.0), 1.0);
  {
    const double drift_gap = poisson.psi(0.7) - 0.7 * poisson.psi_prime(0.0);
    const double x = std::log(0.1) + drift_gap * 25.0;
    const double expected = 25.0 / (25.0 + x * x / 0.49);
    EXPECT_NEAR(lc::cantelli_bound(poisson, 0.7, 0.1, 25.0), expected, 1e-12);
    EXPECT_NEAR(expected, 0.285, 5e-3);
  }

  EXPECT_THROW(lc::cantelli_bound(brown, 0.0, 0.1, 1.0), lc::ZeroKappa);
}

TEST(CantelliBound, DecreasesTowardZero) {
  for (const lc::LevyModel& model : all_kinds()) {
    double prev = 1.0 + 1e-12;
    for (double t : {10.0, 100.0, 1000.0, 1e5}) {
      const double b = lc::cantelli_bound(model, 0.5, 0.05, t);
      EXPECT_LE(b, prev) << lc::to_string(model.kind());
      EXPECT_GT(b, 0.0);
      prev = b;
    }
    EXPECT_LT(prev, 1e-2);
  }
}

TEST(CantelliBound, ExponentGrowsFasterThanItsTangent) {
  for (const lc::LevyModel& model : all_kinds()) {
    for (double kappa : {-0.5, 0.25, 0.6}) {
      if (!model.in_domain(kappa)) continue;
      EXPECT_GT(model.psi(kappa) - kappa * model.psi_prime(0.0), 0.0)
          << lc::to_string(model.kind()) << " kappa " << kappa;
    }
  }
}
