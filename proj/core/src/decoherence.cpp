#include "levycollapse/decoherence.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levycollapse/errors.hpp"

namespace levycollapse {

namespace {

void require_couplings(const LevyModel& model, double lambda, double e_m,
                       double e_n) {
  for (double alpha :
       {lambda * e_m, lambda * e_n, 0.5 * lambda * (e_m + e_n)}) {
    if (!model.in_domain(alpha))
      throw OutsideExponentDomain("level coupling outside exponent domain");
  }
}

}  // namespace

double gamma_rate(const LevyModel& model, double lambda, double e_m, double e_n) {
  require_couplings(model, lambda, e_m, e_n);
  if (model.kind() == NoiseKind::Brownian) {
    // The drift term cancels from the exponent combination and the quadratic
    // part reduces to q (lambda gap)^2 / 8.  Evaluating that form directly
    // keeps the rate exactly invariant under spectral shifts, which the
    // half-sum combination loses to cancellation at large couplings.
    const double gap = lambda * (e_m - e_n);
    return 0.125 * model.diffusion() * gap * gap;
  }
  const double rate = 0.5 * model.psi(lambda * e_m) + 0.5 * model.psi(lambda * e_n) -
                      model.psi(0.5 * lambda * (e_m + e_n));
  return std::max(rate, 0.0);
}

double gamma_rate_integral(double diffusion, const LevyMeasureSpec& measure,
                           double lambda, double e_m, double e_n) {
  const double gap = lambda * (e_m - e_n);
  const double gaussian = 0.125 * diffusion * gap * gap;
  const double a = 0.5 * lambda * e_m;
  const double b = 0.5 * lambda * e_n;
  const double jumps = 0.5 * measure.integrate([a, b](double z) {
    const double d = std::exp(a * z) - std::exp(b * z);
    return d * d;
  });
  return gaussian + jumps;
}

double gamma_rate_integral(const LevyModel& model, double lambda, double e_m,
                           double e_n) {
  require_couplings(model, lambda, e_m, e_n);
  return gamma_rate_integral(model.triplet_diffusion(), model.jump_measure(), lambda,
                             e_m, e_n);
}

double gamma_rate_sinh(const LevyModel& model, double lambda, double e_m,
                       double e_n) {
  require_couplings(model, lambda, e_m, e_n);
  const double gap = lambda * (e_m - e_n);
  const double gaussian = 0.125 * model.triplet_diffusion() * gap * gap;
  const double mid = 0.25 * lambda * (e_m + e_n);
  const double quarter_gap = 0.25 * gap;
  const double jumps = 2.0 * model.jump_measure().integrate(
      [mid, quarter_gap](double z) {
        const double s = std::sinh(quarter_gap * z);
        return std::exp(2.0 * mid * z) * s * s;
      });
  return gaussian + jumps;
}

double effective_q(const LevyModel& model, double lambda, double e_m, double e_n) {
  require_couplings(model, lambda, e_m, e_n);
  return model.psi_double_prime(0.5 * lambda * (e_m + e_n));
}

double small_gap_approx(const LevyModel& model, double lambda, double e_m,
                        double e_n) {
  const double gap = lambda * (e_m - e_n);
  return 0.125 * gap * gap * effective_q(model, lambda, e_m, e_n);
}

DensityMatrix mean_density(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                           const LevyModel& model, double lambda, double t) {
  if (rho0.dim() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");
  if (!(t >= 0.0)) throw NonpositiveTimestep("t must be >= 0");

  const int n = spectrum.num_levels();
  ComplexMatrix mu = ComplexMatrix::Zero(spectrum.dim(), spectrum.dim());
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      const ComplexMatrix block =
          spectrum.projector(m) * rho0.matrix() * spectrum.projector(k);
      if (m == k) {
        mu += block;
        continue;
      }
      const double damping =
          gamma_rate(model, lambda, spectrum.level(m), spectrum.level(k));
      Complex coeff(std::exp(-damping * t), 0.0);
      if (spectrum.phases_enabled()) {
        const double theta = -std::remainder(
            (spectrum.level(m) - spectrum.level(k)) * t / spectrum.hbar(),
            2.0 * std::numbers::pi);
        coeff *= Complex(std::cos(theta), std::sin(theta));
      }
      mu += coeff * block;
    }
  }
  mu = 0.5 * (mu + mu.adjoint().eval());
  return DensityMatrix(std::move(mu));
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& mu, const EnergySpectrum& spectrum,
                           const LevyModel& model, double lambda) {
  if (mu.rows() != spectrum.dim() || mu.cols() != spectrum.dim())
    throw DimensionMismatch("state and spectrum dimensions differ");
  const int n = spectrum.num_levels();
  for (int j = 0; j < n; ++j)
    if (!model.in_domain(lambda * spectrum.level(j)))
      throw OutsideExponentDomain("level coupling outside exponent domain");

  ComplexMatrix rhs = ComplexMatrix::Zero(mu.rows(), mu.cols());

  if (spectrum.phases_enabled()) {
    const ComplexMatrix h = spectrum.hamiltonian();
    rhs -= Complex(0.0, 1.0) / spectrum.hbar() * (h * mu - mu * h);
  }

  const double q = model.triplet_diffusion();
  if (q > 0.0) {
    const ComplexMatrix h = spectrum.hamiltonian();
    const ComplexMatrix h2 = h * h;
    rhs += 0.25 * q * lambda * lambda *
           (h * mu * h - 0.5 * mu * h2 - 0.5 * h2 * mu);
  }

  const LevyMeasureSpec measure = model.jump_measure();
  const bool has_jumps =
      !measure.is_atomic() || !measure.atoms().empty();
  if (has_jumps) {
    // Blockwise action of L(z) = e^{l H z / 2}: on the (m, k) block the
    // integrand collapses to the scalar
    //   e^{l (E_m + E_k) z / 2} - e^{l E_m z}/2 - e^{l E_k z}/2,
    // which vanishes identically on the diagonal.
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        if (m == k) continue;
        const double am = 0.5 * lambda * spectrum.level(m);
        const double ak = 0.5 * lambda * spectrum.level(k);
        const double coeff = measure.integrate([am, ak](double z) {
          return std::exp((am + ak) * z) - 0.5 * std::exp(2.0 * am * z) -
                 0.5 * std::exp(2.0 * ak * z);
        });
        rhs += coeff * (spectrum.projector(m) * mu * spectrum.projector(k));
      }
    }
  }
  return rhs;
}

ComplexMatrix integrate_lindblad(const DensityMatrix& rho0,
                                 const EnergySpectrum& spectrum,
                                 const LevyModel& model, double lambda,
                                 double t_final, int steps) {
  if (!(t_final >= 0.0)) throw NonpositiveTimestep("t_final must be >= 0");
  if (steps <= 0) throw NonpositiveInput("steps must be > 0");
  const double dt = t_final / steps;
  ComplexMatrix mu = rho0.matrix();
  for (int s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = lindblad_rhs(mu, spectrum, model, lambda);
    const ComplexMatrix k2 =
        lindblad_rhs(mu + 0.5 * dt * k1, spectrum, model, lambda);
    const ComplexMatrix k3 =
        lindblad_rhs(mu + 0.5 * dt * k2, spectrum, model, lambda);
    const ComplexMatrix k4 = lindblad_rhs(mu + dt * k3, spectrum, model, lambda);
    mu += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return mu;
}

double clock_bound(double delta_e_ev, double ramsey_s) {
  if (!(delta_e_ev > 0.0) || !(ramsey_s > 0.0))
    throw NonpositiveInput("energy gap and Ramsey time must be > 0");
  const double delta_e_mev = delta_e_ev * 1e-6;
  return 8.0 / (delta_e_mev * delta_e_mev * ramsey_s);
}

std::vector<DecoherencePair> decoherence_table(const EnergySpectrum& spectrum,
                                               const LevyModel& model,
                                               double lambda) {
  std::vector<DecoherencePair> table;
  const int n = spectrum.num_levels();
  for (int m = 0; m < n; ++m) {
    for (int k = m + 1; k < n; ++k) {
      DecoherencePair row;
      row.m = m;
      row.n = k;
      row.e_m = spectrum.level(m);
      row.e_n = spectrum.level(k);
      row.gamma = gamma_rate(model, lambda, row.e_m, row.e_n);
      row.q_eff = effective_q(model, lambda, row.e_m, row.e_n);
      table.push_back(row);
    }
  }
  return table;
}

double min_gamma_rate(const EnergySpectrum& spectrum, const LevyModel& model,
                      double lambda) {
  double min_rate = std::numeric_limits<double>::infinity();
  for (const DecoherencePair& row : decoherence_table(spectrum, model, lambda))
    if (row.gamma > 0.0) min_rate = std::min(min_rate, row.gamma);
  return min_rate;
}

}  // namespace levycollapse
