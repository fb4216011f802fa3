#include <benchmark/benchmark.h>

#include "kfib/invariants.hpp"
#include "kfib/oracle.hpp"

namespace {

using namespace kfib;

PolarisedFibration reference_fibration() {
  const ModelPtr base = build_projective_product({1});
  const SplitBundle bundle = make_split_bundle(
      base, {{Rational(0)}, {Rational(-1)}, {Rational(2)}});
  return make_projectivised_fibration(bundle, DivisorClass("h1", Rational(1)));
}

void BM_Intersect(benchmark::State& state) {
  const PolarisedFibration fibration = reference_fibration();
  const FibrationDegeneration degeneration = make_subsheaf_degeneration(fibration, {0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(intersect_powers(
        *degeneration.total_model,
        {{degeneration.Hcal, 3}, {degeneration.Lcal, 1}}));
  }
}
BENCHMARK(BM_Intersect);

void BM_HilbertEnumeration(benchmark::State& state) {
  const PolarisedFibration fibration = reference_fibration();
  const long j = validity_threshold(fibration);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hilbert_count(fibration, j, state.range(0)));
  }
}
BENCHMARK(BM_HilbertEnumeration)->Arg(8)->Arg(16)->Arg(24);

void BM_PolyFit(benchmark::State& state) {
  BivariatePolynomial p;
  p.add_term(2, 3, Rational(1, 2));
  p.add_term(1, 1, Rational(-3));
  p.add_term(0, 2, Rational(7, 3));
  p.add_term(0, 0, Rational(1));
  std::vector<Sample> samples;
  for (long j = 1; j <= 4; ++j)
    for (long k = 1; k <= 5; ++k)
      samples.push_back({j, k, p(Rational(j), Rational(k))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly_fit(samples, 2, 3));
  }
}
BENCHMARK(BM_PolyFit);

void BM_FullExpansion(benchmark::State& state) {
  const PolarisedFibration fibration = reference_fibration();
  const FibrationDegeneration degeneration = make_subsheaf_degeneration(fibration, {0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(df_fibration_expansion(degeneration));
  }
}
BENCHMARK(BM_FullExpansion);

void BM_WeightSpectrum(benchmark::State& state) {
  const PolarisedFibration fibration = reference_fibration();
  const FibrationDegeneration degeneration = make_subsheaf_degeneration(fibration, {0});
  const long j = validity_threshold(fibration);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_spectrum(degeneration, j, state.range(0)));
  }
}
BENCHMARK(BM_WeightSpectrum)->Arg(8)->Arg(16)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
