#include <benchmark/benchmark.h>

#include <random>

#include "pmic/bayes.hpp"
#include "pmic/curation.hpp"
#include "pmic/harness.hpp"
#include "pmic/mi_benchmark.hpp"
#include "pmic/pmi.hpp"

namespace {

using namespace pmic;

EmbeddedDataset logistic_data(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = z(rng);
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x(i, 0) + 0.5 * z(rng) > 0.0;
  return EmbeddedDataset(std::move(x), std::move(y));
}

void BM_LaplaceFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const auto data = logistic_data(n, d, 1);
  const PriorSpec prior(1.0, d);
  for (auto _ : state) benchmark::DoNotOptimize(laplace_fit(data, prior));
}
BENCHMARK(BM_LaplaceFit)->Args({75, 21})->Args({120, 101})->Args({500, 101});

void BM_PmiGaussian(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const PriorSpec prior(1.0, d);
  const auto a = laplace_fit(logistic_data(80, d, 2), prior);
  const auto b = laplace_fit(logistic_data(80, d, 3), prior);
  const auto p = prior.distribution();
  for (auto _ : state) benchmark::DoNotOptimize(pmi_gaussian(a, b, p).value);
}
BENCHMARK(BM_PmiGaussian)->Arg(21)->Arg(101);

void BM_GeneratePair(benchmark::State& state) {
  Rng rng(4);
  const auto pool = synth_corpus(20, 2000, 6.0, rng);
  const auto spec = make_benchmark_spec(0.5, 1, 50, 100, 5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_pair(spec, pool, i++));
}
BENCHMARK(BM_GeneratePair);

void BM_ScorePair(benchmark::State& state) {
  Rng rng(6);
  const auto pool = synth_corpus(20, 2000, 6.0, rng);
  const auto spec = make_benchmark_spec(0.5, 1, 50, 100, 7);
  const auto pair = generate_pair(spec, pool, 0);
  HarnessOptions options;
  options.append_bias = true;
  options.path = static_cast<PmiPath>(state.range(0));
  options.mc_samples = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(score_pair(pair.d, pair.t, 1.0, options, 0).value);
}
BENCHMARK(BM_ScorePair)->DenseRange(0, 2);

void BM_MatchRatioDuplicate(benchmark::State& state) {
  Rng rng(8);
  const auto pool = synth_tagged_corpus(100, 200, 2.0, 5.0, rng);
  const auto pair = generate_curation_pair(CurationPairSpec{}, pool, 0);
  for (auto _ : state) benchmark::DoNotOptimize(match_ratio_duplicate(pair.pair.d, pair.pair.t, rng));
}
BENCHMARK(BM_MatchRatioDuplicate);

}  // namespace
BENCHMARK_MAIN();
