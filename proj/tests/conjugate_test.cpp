#include <gtest/gtest.h>

#include <cmath>

#include "pmic/conjugate_benchmark.hpp"
#include "pmic/error.hpp"

namespace pmic {
namespace {

double r_squared(const ConjugateBenchmark& b) {
  const double vd = b.prior_var + b.noise_var / b.n_d;
  const double vt = b.prior_var + b.noise_var / b.n_t;
  return b.prior_var * b.prior_var / (vd * vt);
}

TEST(ConjugateBenchmark, TruthFormula) {
  ConjugateBenchmark b;
  EXPECT_NEAR(b.truth_nats(), -0.5 * std::log(0.75), 1e-15);
  b.n_d = 4;
  b.n_t = 9;
  b.prior_var = 2.0;
  b.noise_var = 3.0;
  const double r2 = 4.0 / ((2.0 + 0.75) * (2.0 + 1.0 / 3.0));
  EXPECT_NEAR(b.truth_nats(), -0.5 * std::log(1.0 - r2), 1e-14);
  EXPECT_NEAR(b.truth_bits(), b.truth_nats() / std::log(2.0), 1e-15);
}

TEST(ConjugateBenchmark, TargetRoundTrip) {
  for (double bits : {0.05, 0.5, 1.0, 3.0}) {
    const auto b = ConjugateBenchmark::for_target_bits(bits, 1.0, 20, 20, 1);
    EXPECT_NEAR(b.truth_bits(), bits, 1e-10);
  }
  EXPECT_THROW(ConjugateBenchmark::for_target_bits(0.0, 1.0, 5, 5, 1), ValidationError);
  EXPECT_THROW(ConjugateBenchmark::for_target_bits(0.5, -1.0, 5, 5, 1), ValidationError);
}

TEST(ConjugateBenchmark, MeanPmiIsUnbiasedForMutualInformation) {
  const auto b = ConjugateBenchmark::for_target_bits(0.5, 1.0, 20, 20, 77);
  constexpr int k = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < k; ++i) {
    const double v = b.pmi(b.generate(static_cast<std::size_t>(i)));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / k;
  const double sd = std::sqrt((sum2 - k * mean * mean) / (k - 1));
  EXPECT_LE(std::abs(mean - b.truth_nats()), 4.0 * sd / std::sqrt(k));
}

TEST(ConjugateBenchmark, IndependentPairsAverageMinusLautum) {
  const auto b = ConjugateBenchmark::for_target_bits(0.5, 1.0, 10, 30, 78);
  const double r2 = r_squared(b);
  const double expected = b.truth_nats() - r2 / (1.0 - r2);
  constexpr int k = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < k; ++i) {
    const double v = b.pmi(b.generate_independent(static_cast<std::size_t>(i)));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / k;
  const double sd = std::sqrt((sum2 - k * mean * mean) / (k - 1));
  EXPECT_LE(std::abs(mean - expected), 4.0 * sd / std::sqrt(k));
  EXPECT_LT(mean, 0.0);
}

TEST(ConjugateBenchmark, GenerationIsDeterministic) {
  const auto b = ConjugateBenchmark::for_target_bits(0.5, 1.0, 5, 7, 3);
  const auto p = b.generate(12);
  EXPECT_EQ(p.d.size(), 5u);
  EXPECT_EQ(p.t.size(), 7u);
  EXPECT_EQ(p.d, b.generate(12).d);
  EXPECT_NE(p.d, b.generate(13).d);
}

}  // namespace
}  // namespace pmic
