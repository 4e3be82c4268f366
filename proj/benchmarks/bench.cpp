#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "levycollapse/config.hpp"
#include "levycollapse/decoherence.hpp"
#include "levycollapse/ensemble.hpp"
#include "levycollapse/information.hpp"
#include "levycollapse/levy.hpp"
#include "levycollapse/reduction.hpp"
#include "levycollapse/rng.hpp"

namespace lc = levycollapse;

namespace {

lc::LevyModel model_for(int kind) {
  switch (kind) {
    case 0: return lc::LevyModel::brownian(0.2, 1.0);
    case 1: return lc::LevyModel::poisson(1.0);
    case 2: return lc::LevyModel::compound_poisson_exp(1.0, 2.0);
    default: return lc::LevyModel::gamma(1.0, 1.0);
  }
}

lc::ScenarioConfig bench_config() {
  lc::ScenarioConfig c;
  c.hamiltonian = lc::ComplexMatrix::Zero(2, 2);
  c.hamiltonian(1, 1) = 0.5;
  lc::ComplexVector v(2);
  v << std::sqrt(0.3), std::sqrt(0.7);
  c.initial_state = v * v.adjoint();
  c.kind = lc::NoiseKind::Gamma;
  c.intensity = 1.0;
  c.scale = 1.0;
  c.horizon = 8.0;
  c.steps = 100;
  c.paths = 1;
  c.threads = 1;
  return c;
}

}  // namespace

static void BM_PosteriorTwoLevel(benchmark::State& state) {
  const lc::LevyModel model = model_for(static_cast<int>(state.range(0)));
  const double e2 = model.kind() == lc::NoiseKind::Gamma ? 0.5 : 1.0;
  const lc::Signal signal({0.0, e2}, {0.3, 0.7}, 1.0);
  double xi = 0.0;
  for (auto _ : state) {
    xi += 0.01;
    benchmark::DoNotOptimize(
        lc::posterior_probabilities(model, signal, xi, 1.0 + xi));
  }
}
BENCHMARK(BM_PosteriorTwoLevel)->DenseRange(0, 3);

static void BM_ClosedFormDensity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  lc::ComplexMatrix h = lc::ComplexMatrix::Zero(n, n);
  lc::ComplexVector v(n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = 0.1 * j;
    v(j) = 1.0;
  }
  v.normalize();
  const lc::EnergySpectrum spectrum = lc::EnergySpectrum::from_dense(h);
  const lc::DensityMatrix rho0 = lc::DensityMatrix::pure(lc::PureState(v));
  const lc::Signal signal = lc::Signal::from_state(rho0, spectrum, 1.0);
  const lc::ClosedFormEvolver evolver(lc::LevyModel::brownian(0.0, 1.0), signal,
                                      rho0, spectrum);
  double xi = 0.0;
  for (auto _ : state) {
    xi += 0.01;
    benchmark::DoNotOptimize(evolver.density(xi, 1.0 + xi));
  }
}
BENCHMARK(BM_ClosedFormDensity)->Arg(2)->Arg(4)->Arg(8);

static void BM_SampleIncrement(benchmark::State& state) {
  const lc::LevyModel model = model_for(static_cast<int>(state.range(0)));
  lc::PhiloxRng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.sample_increment(0.01, rng));
  }
}
BENCHMARK(BM_SampleIncrement)->DenseRange(0, 3);

static void BM_DampingRateQuadrature(benchmark::State& state) {
  const lc::LevyModel model = model_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lc::gamma_rate_integral(model, 0.3, 0.2, 0.65));
  }
}
BENCHMARK(BM_DampingRateQuadrature)->DenseRange(0, 3);

static void BM_SimulatePath(benchmark::State& state) {
  const lc::ScenarioConfig config = bench_config();
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lc::simulate_path(config, index++));
  }
}
BENCHMARK(BM_SimulatePath);
