#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levycollapse/rng.hpp"

namespace levycollapse {

enum class NoiseKind { Brownian, Poisson, CompoundPoissonExp, Gamma };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

class LevyMeasureSpec;

/*
 * One-dimensional Levy process specified by its cumulant (exponent)
 * function psi(alpha) = (1/t) log E exp(alpha xi_t), finite on the open
 * domain (-inf, domain_sup()).
 *
 *   Brownian(p, q):            psi = p a + q a^2 / 2
 *   Poisson(m):                psi = m (e^a - 1)
 *   CompoundPoissonExp(m, b):  psi = m a / (b - a)
 *   Gamma(m, phi):             psi = -m log(1 - phi a)
 */
class LevyModel {
public:
  static LevyModel brownian(double drift, double diffusion);
  static LevyModel poisson(double intensity);
  static LevyModel compound_poisson_exp(double intensity, double jump_rate);
  static LevyModel gamma(double rate, double scale);

  NoiseKind kind() const { return kind_; }
  double drift() const { return drift_; }
  double diffusion() const { return diffusion_; }
  double intensity() const { return intensity_; }
  double jump_rate() const { return jump_rate_; }
  double scale() const { return scale_; }

  // Supremum of the exponent domain (+inf, +inf, jump_rate, 1/scale).
  double domain_sup() const;
  bool in_domain(double alpha) const;

  double psi(double alpha) const;
  double psi_prime(double alpha) const;
  double psi_double_prime(double alpha) const;

  // Exponential change of measure at kappa: the tilted process is again
  // one of the four kinds, with psi_tilted(a) = psi(a + kappa) - psi(kappa).
  LevyModel esscher_tilt(double kappa) const;

  // Increment of the process over dt > 0, drawn from the exact law.
  double sample_increment(double dt, PhiloxRng& rng) const;

  // True when every path is nondecreasing (all jump kinds here).
  bool monotone_paths() const { return kind_ != NoiseKind::Brownian; }

  // Characteristic triplet {p, q, nu} reproducing psi exactly under the
  // representation with compensation of jumps smaller than one.
  double triplet_drift() const;
  double triplet_diffusion() const { return kind_ == NoiseKind::Brownian ? diffusion_ : 0.0; }
  LevyMeasureSpec jump_measure() const;

private:
  LevyModel(NoiseKind kind, double a, double b);

  NoiseKind kind_;
  double drift_ = 0.0;      // Brownian p
  double diffusion_ = 0.0;  // Brownian q
  double intensity_ = 0.0;  // jump kinds m
  double jump_rate_ = 0.0;  // CompoundPoissonExp beta
  double scale_ = 0.0;      // Gamma phi
};

/*
 * Jump measure nu(dz), either a finite list of atoms or a density with
 * explicit support. Must integrate min(1, z^2) finitely and place no mass
 * at zero.
 */
class LevyMeasureSpec {
public:
  struct Atom {
    double position;
    double rate;
  };

  static LevyMeasureSpec atomic(std::vector<Atom> atoms);
  static LevyMeasureSpec density(std::function<double(double)> density,
                                 double support_lo, double support_hi,
                                 double quadrature_tol = 1e-10);

  bool is_atomic() const { return !atoms_.empty() || !density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // integral of f dnu; atoms sum exactly, densities integrate adaptively
  // with the support split at |z| = 1.
  double integrate(const std::function<double(double)>& f) const;

private:
  LevyMeasureSpec() = default;
  void validate() const;

  std::vector<Atom> atoms_;
  std::function<double(double)> density_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double tol_ = 1e-10;
};

// Evaluates p a + q a^2/2 + integral of (e^{az} - 1 - az 1{|z|<1}) dnu for
// the model's own triplet; agrees with psi(alpha) up to quadrature error.
double levy_khintchine_value(const LevyModel& model, double alpha);
// Same evaluation against a caller-supplied triplet.
double levy_khintchine_value(double drift, double diffusion,
                             const LevyMeasureSpec& measure, double alpha);

// exp(kappa xi_t - psi(kappa) t), computed in log space.
double exponential_martingale(const LevyModel& model, double kappa, double xi_t,
                              double t);
double log_exponential_martingale(const LevyModel& model, double kappa, double xi_t,
                                  double t);

/*
 * One-sided bound on P(exp(kappa xi_t - psi(kappa) t) > eps):
 *   v t / (v t + X^2 / kappa^2),  X = log eps + (psi(kappa) - kappa psi'(0)) t
 * with v = psi''(0); returns 1 when X < 0 (bound uninformative).
 */
double cantelli_bound(const LevyModel& model, double kappa, double eps, double t);

}  // namespace levycollapse
