#include "levycollapse/levy.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "levycollapse/errors.hpp"

namespace levycollapse {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Brownian: return "brownian";
    case NoiseKind::Poisson: return "poisson";
    case NoiseKind::CompoundPoissonExp: return "compound-poisson-exp";
    case NoiseKind::Gamma: return "gamma";
  }
  throw Error("unreachable noise kind");
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "brownian") return NoiseKind::Brownian;
  if (name == "poisson") return NoiseKind::Poisson;
  if (name == "compound-poisson-exp") return NoiseKind::CompoundPoissonExp;
  if (name == "gamma") return NoiseKind::Gamma;
  throw ConfigInvalid("unknown noise kind: " + name);
}

LevyModel::LevyModel(NoiseKind kind, double a, double b) : kind_(kind) {
  switch (kind) {
    case NoiseKind::Brownian:
      drift_ = a;
      diffusion_ = b;
      if (diffusion_ < 0.0) throw NonpositiveInput("diffusion must be >= 0");
      break;
    case NoiseKind::Poisson:
      intensity_ = a;
      if (intensity_ <= 0.0) throw NonpositiveInput("intensity must be > 0");
      break;
    case NoiseKind::CompoundPoissonExp:
      intensity_ = a;
      jump_rate_ = b;
      if (intensity_ <= 0.0 || jump_rate_ <= 0.0)
        throw NonpositiveInput("intensity and jump rate must be > 0");
      break;
    case NoiseKind::Gamma:
      intensity_ = a;
      scale_ = b;
      if (intensity_ <= 0.0 || scale_ <= 0.0)
        throw NonpositiveInput("rate and scale must be > 0");
      break;
  }
}

LevyModel LevyModel::brownian(double drift, double diffusion) {
  return LevyModel(NoiseKind::Brownian, drift, diffusion);
}
LevyModel LevyModel::poisson(double intensity) {
  return LevyModel(NoiseKind::Poisson, intensity, 0.0);
}
LevyModel LevyModel::compound_poisson_exp(double intensity, double jump_rate) {
  return LevyModel(NoiseKind::CompoundPoissonExp, intensity, jump_rate);
}
LevyModel LevyModel::gamma(double rate, double scale) {
  return LevyModel(NoiseKind::Gamma, rate, scale);
}

double LevyModel::domain_sup() const {
  switch (kind_) {
    case NoiseKind::Brownian:
    case NoiseKind::Poisson: return kInf;
    case NoiseKind::CompoundPoissonExp: return jump_rate_;
    case NoiseKind::Gamma: return 1.0 / scale_;
  }
  throw Error("unreachable noise kind");
}

bool LevyModel::in_domain(double alpha) const { return alpha < domain_sup(); }

namespace {
void require_domain(const LevyModel& m, double alpha) {
  if (!m.in_domain(alpha))
    throw OutsideExponentDomain("alpha = " + std::to_string(alpha) +
                                " is outside the exponent domain (sup = " +
                                std::to_string(m.domain_sup()) + ")");
}
}  // namespace

double LevyModel::psi(double alpha) const {
  require_domain(*this, alpha);
  switch (kind_) {
    case NoiseKind::Brownian:
      return drift_ * alpha + 0.5 * diffusion_ * alpha * alpha;
    case NoiseKind::Poisson:
      return intensity_ * std::expm1(alpha);
    case NoiseKind::CompoundPoissonExp:
      return intensity_ * alpha / (jump_rate_ - alpha);
    case NoiseKind::Gamma:
      return -intensity_ * std::log1p(-scale_ * alpha);
  }
  throw Error("unreachable noise kind");
}

double LevyModel::psi_prime(double alpha) const {
  require_domain(*this, alpha);
  switch (kind_) {
    case NoiseKind::Brownian: return drift_ + diffusion_ * alpha;
    case NoiseKind::Poisson: return intensity_ * std::exp(alpha);
    case NoiseKind::CompoundPoissonExp: {
      const double denom = jump_rate_ - alpha;
      return intensity_ * jump_rate_ / (denom * denom);
    }
    case NoiseKind::Gamma:
      return intensity_ * scale_ / (1.0 - scale_ * alpha);
  }
  throw Error("unreachable noise kind");
}

double LevyModel::psi_double_prime(double alpha) const {
  require_domain(*this, alpha);
  switch (kind_) {
    case NoiseKind::Brownian: return diffusion_;
    case NoiseKind::Poisson: return intensity_ * std::exp(alpha);
    case NoiseKind::CompoundPoissonExp: {
      const double denom = jump_rate_ - alpha;
      return 2.0 * intensity_ * jump_rate_ / (denom * denom * denom);
    }
    case NoiseKind::Gamma: {
      const double denom = 1.0 - scale_ * alpha;
      return intensity_ * scale_ * scale_ / (denom * denom);
    }
  }
  throw Error("unreachable noise kind");
}

LevyModel LevyModel::esscher_tilt(double kappa) const {
  require_domain(*this, kappa);
  switch (kind_) {
    case NoiseKind::Brownian:
      return brownian(drift_ + diffusion_ * kappa, diffusion_);
    case NoiseKind::Poisson:
      return poisson(intensity_ * std::exp(kappa));
    case NoiseKind::CompoundPoissonExp:
      return compound_poisson_exp(intensity_ * jump_rate_ / (jump_rate_ - kappa),
                                  jump_rate_ - kappa);
    case NoiseKind::Gamma:
      return gamma(intensity_, scale_ / (1.0 - scale_ * kappa));
  }
  throw Error("unreachable noise kind");
}

double LevyModel::sample_increment(double dt, PhiloxRng& rng) const {
  if (!(dt > 0.0)) throw NonpositiveTimestep("dt must be positive");
  switch (kind_) {
    case NoiseKind::Brownian: {
      if (diffusion_ == 0.0) return drift_ * dt;
      std::normal_distribution<double> normal(drift_ * dt,
                                              std::sqrt(diffusion_ * dt));
      return normal(rng);
    }
    case NoiseKind::Poisson: {
      std::poisson_distribution<long long> poisson(intensity_ * dt);
      return static_cast<double>(poisson(rng));
    }
    case NoiseKind::CompoundPoissonExp: {
      std::poisson_distribution<long long> count(intensity_ * dt);
      std::exponential_distribution<double> jump(jump_rate_);
      const long long n = count(rng);
      double sum = 0.0;
      for (long long i = 0; i < n; ++i) sum += jump(rng);
      return sum;
    }
    case NoiseKind::Gamma: {
      std::gamma_distribution<double> gamma(intensity_ * dt, scale_);
      return gamma(rng);
    }
  }
  throw Error("unreachable noise kind");
}

double LevyModel::triplet_drift() const {
  switch (kind_) {
    case NoiseKind::Brownian: return drift_;
    case NoiseKind::Poisson:
      // The unit jump is not compensated (|z| = 1 is outside {|z| < 1}).
      return 0.0;
    case NoiseKind::CompoundPoissonExp:
      // m integral_0^1 z b e^{-bz} dz
      return intensity_ / jump_rate_ *
             (1.0 - std::exp(-jump_rate_) * (1.0 + jump_rate_));
    case NoiseKind::Gamma:
      // m integral_0^1 e^{-z/phi} dz
      return intensity_ * scale_ * (1.0 - std::exp(-1.0 / scale_));
  }
  throw Error("unreachable noise kind");
}

LevyMeasureSpec LevyModel::jump_measure() const {
  switch (kind_) {
    case NoiseKind::Brownian:
      return LevyMeasureSpec::atomic({});
    case NoiseKind::Poisson:
      return LevyMeasureSpec::atomic({{1.0, intensity_}});
    case NoiseKind::CompoundPoissonExp: {
      const double m = intensity_;
      const double b = jump_rate_;
      return LevyMeasureSpec::density(
          [m, b](double z) { return m * b * std::exp(-b * z); }, 0.0, kInf);
    }
    case NoiseKind::Gamma: {
      const double m = intensity_;
      const double phi = scale_;
      return LevyMeasureSpec::density(
          [m, phi](double z) { return m / z * std::exp(-z / phi); }, 0.0, kInf);
    }
  }
  throw Error("unreachable noise kind");
}

LevyMeasureSpec LevyMeasureSpec::atomic(std::vector<Atom> atoms) {
  LevyMeasureSpec spec;
  spec.atoms_ = std::move(atoms);
  for (const Atom& a : spec.atoms_) {
    if (a.position == 0.0) throw InvalidLevyMeasure("atom at zero");
    if (!(a.rate > 0.0)) throw InvalidLevyMeasure("atom rate must be > 0");
  }
  return spec;
}

LevyMeasureSpec LevyMeasureSpec::density(std::function<double(double)> density,
                                         double support_lo, double support_hi,
                                         double quadrature_tol) {
  LevyMeasureSpec spec;
  spec.density_ = std::move(density);
  spec.lo_ = support_lo;
  spec.hi_ = support_hi;
  spec.tol_ = quadrature_tol;
  if (!(support_lo < support_hi)) throw InvalidLevyMeasure("empty support");
  spec.validate();
  return spec;
}

void LevyMeasureSpec::validate() const {
  // min(1, z^2) must integrate finitely over the support.
  const double mass = integrate(
      [](double z) { return std::min(1.0, z * z); });
  if (!std::isfinite(mass)) throw InvalidLevyMeasure("min(1, z^2) not integrable");
}

double LevyMeasureSpec::integrate(const std::function<double(double)>& f) const {
  if (is_atomic()) {
    double sum = 0.0;
    for (const Atom& a : atoms_) sum += a.rate * f(a.position);
    return sum;
  }
  // The density is evaluated first so quadrature nodes far in the tail,
  // where it underflows to zero, never reach f. A non-finite product on top
  // of a sub-normal density is the same underflow one step earlier (the
  // true product is below any tolerance for admissible exponents); a
  // non-finite product against appreciable density still escalates.
  const auto g = [this, &f](double z) {
    const double d = density_(z);
    if (d == 0.0) return 0.0;
    const double v = f(z) * d;
    if (!std::isfinite(v) && d < 1e-200) return 0.0;
    return v;
  };
  double total = 0.0;
  double error = 0.0;
  const auto accumulate = [&](double value, double err) {
    total += value;
    error += err;
  };
  // Pieces split at |z| = 1 so the small-jump compensator and the large-jump
  // tail are integrated on their own scales.
  const std::vector<std::pair<double, double>> cuts = {
      {lo_, -1.0}, {-1.0, 0.0}, {0.0, 1.0}, {1.0, hi_}};
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> semi_infinite;
  for (const auto& [a, b] : cuts) {
    const double left = std::max(a, lo_);
    const double right = std::min(b, hi_);
    if (!(left < right)) continue;
    double err = 0.0;
    double value = 0.0;
    if (std::isinf(right)) {
      value = semi_infinite.integrate([&g, left](double u) { return g(left + u); },
                                      tol_, &err);
    } else if (std::isinf(left)) {
      value = semi_infinite.integrate(
          [&g, right](double u) { return g(right - u); }, tol_, &err);
    } else {
      value = finite.integrate(g, left, right, tol_, &err);
    }
    if (!std::isfinite(value))
      throw QuadratureFailure("jump-measure integral diverged");
    accumulate(value, err);
  }
  if (error > 1e-6 * std::max(1.0, std::abs(total)))
    throw QuadratureFailure("jump-measure quadrature did not converge");
  return total;
}

double levy_khintchine_value(double drift, double diffusion,
                             const LevyMeasureSpec& measure, double alpha) {
  const double jump_part = measure.integrate([alpha](double z) {
    const double compensator = std::abs(z) < 1.0 ? alpha * z : 0.0;
    return std::expm1(alpha * z) - compensator;
  });
  return drift * alpha + 0.5 * diffusion * alpha * alpha + jump_part;
}

double levy_khintchine_value(const LevyModel& model, double alpha) {
  require_domain(model, alpha);
  return levy_khintchine_value(model.triplet_drift(), model.triplet_diffusion(),
                               model.jump_measure(), alpha);
}

double log_exponential_martingale(const LevyModel& model, double kappa, double xi_t,
                                  double t) {
  if (!(t >= 0.0)) throw NonpositiveTimestep("t must be >= 0");
  return kappa * xi_t - model.psi(kappa) * t;
}

double exponential_martingale(const LevyModel& model, double kappa, double xi_t,
                              double t) {
  return std::exp(log_exponential_martingale(model, kappa, xi_t, t));
}

double cantelli_bound(const LevyModel& model, double kappa, double eps, double t) {
  if (kappa == 0.0) throw ZeroKappa("kappa must be nonzero");
  if (!(eps > 0.0)) throw NonpositiveInput("eps must be > 0");
  if (!(t > 0.0)) throw NonpositiveTimestep("t must be > 0");
  const double gap = model.psi(kappa) - kappa * model.psi_prime(0.0);
  const double x = std::log(eps) + gap * t;
  if (x < 0.0) return 1.0;
  const double vt = model.psi_double_prime(0.0) * t;
  return vt / (vt + x * x / (kappa * kappa));
}

}  // namespace levycollapse
