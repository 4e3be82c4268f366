#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace levycollapse {

// Shared statistical thresholds for every stochastic check in the suite.
namespace thresholds {
inline constexpr double kMeanSigma = 4.0;        // two-sided mean comparisons
inline constexpr double kBoundSigma = 3.0;       // one-sided bound exceedance
inline constexpr double kStepSigma = 2.0;        // supermartingale step checks
inline constexpr double kDistributionP = 1e-3;   // KS / chi-squared acceptance
}  // namespace thresholds

/*
 * Online mean/variance accumulator (Welford). Merging is associative in
 * value but not in rounding; ensemble code always merges in path order so
 * results are independent of the parallelism degree.
 */
class RunningMoments {
public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double stddev() const noexcept { return std::sqrt(variance()); }
  double standard_error() const noexcept {
    return n_ > 0 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0;
  }

private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Compensated (Kahan) sum for long fixed-order reductions.
class KahanSum {
public:
  void add(double x) noexcept {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const noexcept { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Survival function of the Kolmogorov distribution, Q(x) = P(K > x).
double kolmogorov_q(double x);

// Two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value.
double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b);

// Upper-tail p-value of a chi-squared statistic with dof degrees of freedom.
double chi_squared_pvalue(double statistic, double dof);

// Pearson chi-squared statistic p-value for observed counts vs expected
// probabilities (dof = bins - 1).
double chi_squared_uniformity_pvalue(std::span<const std::size_t> observed,
                                     std::span<const double> probabilities);

// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y);

}  // namespace levycollapse
