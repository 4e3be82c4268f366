#include "levycollapse/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <stdexcept>

namespace levycollapse {

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  // Alternating series 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2); terms decay
  // fast enough that 100 terms are far beyond double precision.
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty KS sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const std::size_t na = sa.size();
  const std::size_t nb = sb.size();
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < na && ib < nb) {
    const double v = std::min(sa[ia], sb[ib]);
    while (ia < na && sa[ia] <= v) ++ia;
    while (ib < nb && sb[ib] <= v) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb));
  }
  const double ne = static_cast<double>(na) * nb / static_cast<double>(na + nb);
  return kolmogorov_q(std::sqrt(ne) * d);
}

double chi_squared_pvalue(double statistic, double dof) {
  if (statistic < 0.0 || dof <= 0.0)
    throw std::invalid_argument("bad chi-squared inputs");
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

double chi_squared_uniformity_pvalue(std::span<const std::size_t> observed,
                                     std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.empty())
    throw std::invalid_argument("bad chi-squared bins");
  std::size_t total = 0;
  for (auto c : observed) total += c;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (expected <= 0.0) throw std::invalid_argument("zero expected count");
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
  }
  return chi_squared_pvalue(stat, static_cast<double>(observed.size() - 1));
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("bad regression inputs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate regression abscissa");
  return sxy / sxx;
}

}  // namespace levycollapse
