#include <benchmark/benchmark.h>

#include "arw/covariance.hpp"
#include "arw/kacrice.hpp"
#include "arw/lattice.hpp"
#include "arw/montecarlo.hpp"

namespace {

const arw::TorusCurve& arc() {
  static const arw::TorusCurve c = arw::parse_curve_spec("circle:r=0.2,arc=1.0");
  return c;
}

void BM_Enumerate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(arw::enumerate_lattice_points(state.range(0)));
}
BENCHMARK(BM_Enumerate)->Arg(5525)->Arg(160225)->Arg(9999997);

void BM_CovarianceJet(benchmark::State& state) {
  const auto set = arw::enumerate_lattice_points(state.range(0));
  double t = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(arw::covariance_jet(set, arc(), t, 0.13));
    t = t < 0.1 ? t + 1e-4 : 0.01;
  }
  state.counters["N"] = static_cast<double>(set.n());
}
BENCHMARK(BM_CovarianceJet)->Arg(5525)->Arg(160225);

void BM_TwoPointK2(benchmark::State& state) {
  const auto set = arw::enumerate_lattice_points(160225);
  const auto jet = arw::covariance_jet(set, arc(), 0.05, 0.12);
  const double alpha = arw::alpha_of(160225);
  for (auto _ : state) benchmark::DoNotOptimize(arw::two_point_k2(jet, alpha));
}
BENCHMARK(BM_TwoPointK2);

void BM_CountZeros(benchmark::State& state) {
  const auto set = arw::enumerate_lattice_points(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const auto sample = arw::sample_wave(set, 1, trial++);
    benchmark::DoNotOptimize(arw::count_zeros(sample, arc()));
  }
}
BENCHMARK(BM_CountZeros)->Arg(5525)->Arg(160225)->Unit(benchmark::kMillisecond);

void BM_VariancePrediction(benchmark::State& state) {
  const auto set = arw::enumerate_lattice_points(state.range(0));
  arw::QuadratureOptions q;
  q.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(arw::variance_prediction(set, arc(), q));
}
BENCHMARK(BM_VariancePrediction)->Arg(5525)->Arg(160225)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
