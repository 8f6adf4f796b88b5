#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "pmic/bayes.hpp"
#include "pmic/error.hpp"
#include "pmic/mi_benchmark.hpp"
#include "support.hpp"

namespace pmic {
namespace {

TEST(TableMi, KnownValues) {
  EXPECT_NEAR(table_mi(0.25), 0.0, 1e-15);
  EXPECT_NEAR(table_mi(0.5), 1.0, 1e-15);
  EXPECT_NEAR(table_mi(0.4), 0.2780719051126377, 1e-13);
  EXPECT_THROW(table_mi(0.2), ValidationError);
  EXPECT_THROW(table_mi(0.51), ValidationError);
}

TEST(TableMi, MonotoneAndInvertible) {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double rho = 0.25 + 0.0025 * i;
    const double mi = table_mi(rho);
    EXPECT_GT(mi, prev);
    prev = mi;
  }
  for (int i = 0; i <= 20; ++i) {
    const double target = 0.05 * i;
    const double rho = solve_rho(target);
    EXPECT_GE(rho, 0.25);
    EXPECT_LE(rho, 0.5);
    EXPECT_NEAR(table_mi(rho), target, 1e-11);
  }
  EXPECT_THROW(solve_rho(1.2), ValidationError);
  EXPECT_THROW(solve_rho(-0.1), ValidationError);
}

TEST(LabelVector, ParityHoldsOnEveryDraw) {
  Rng rng(41);
  for (double r : {0.1, 0.3, 0.45, 0.6, 0.9}) {
    for (int rep = 0; rep < 500; ++rep) {
      const int n = 2 + rep % 99;
      const auto labels = sample_label_vector(r, n, true, rng);
      ASSERT_EQ(labels.size(), static_cast<std::size_t>(n));
      int parity = 0;
      for (auto l : labels) parity ^= l;
      EXPECT_EQ(parity, r < 0.5 ? 1 : 0);
    }
  }
}

TEST(LabelVector, ZeroRateMatchesR) {
  Rng rng(42);
  for (double r : {0.1, 0.4, 0.7}) {
    long zeros = 0, total = 0;
    for (int rep = 0; rep < 10000; ++rep) {
      const auto labels = sample_label_vector(r, 20, false, rng);
      for (auto l : labels) zeros += (l == 0);
      total += 20;
    }
    const double p = static_cast<double>(zeros) / total;
    EXPECT_LE(std::abs(p - r), 4.0 * std::sqrt(r * (1 - r) / total));
  }
}

TEST(LabelVector, Validation) {
  Rng rng(43);
  EXPECT_THROW(sample_label_vector(0.5, 1, true, rng), ValidationError);
  EXPECT_THROW(sample_label_vector(0.0, 5, true, rng), ValidationError);
  EXPECT_THROW(sample_label_vector(1.0, 5, true, rng), ValidationError);
}

TEST(JointTable, DrawsFromGrids) {
  Rng rng(44);
  for (int i = 0; i < 200; ++i) {
    const auto t = draw_joint_table(0.3, rng);
    for (double a : {t.a_d, t.a_t}) {
      EXPECT_NEAR(a * 10.0, std::round(a * 10.0), 1e-12);
      EXPECT_TRUE(a >= 0.1 - 1e-12 && a <= 0.4 + 1e-12);
    }
    for (double b : {t.b_d, t.b_t}) {
      EXPECT_NEAR(b * 10.0, std::round(b * 10.0), 1e-12);
      EXPECT_TRUE(b >= 0.6 - 1e-12 && b <= 0.9 + 1e-12);
    }
  }
  JointTable bad;
  bad.a_d = 0.5;
  EXPECT_THROW(bad.validate(), ValidationError);
}

class GeneratorTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(45);
    pool_ = std::make_unique<CorpusPool>(synth_corpus(5, 200, 6.0, rng));
  }
  std::unique_ptr<CorpusPool> pool_;
};

TEST_F(GeneratorTest, CellFrequenciesMatchTable) {
  const auto spec = make_benchmark_spec(0.6, 10000, 50, 100, 7);
  const auto& tb = spec.table;
  std::array<double, 4> observed{};
  for (std::size_t i = 0; i < 10000; ++i) {
    const auto g = generate_pair_detailed(spec, *pool_, i);
    const bool dl = g.r_d == tb.a_d, tl = g.r_t == tb.a_t;
    EXPECT_TRUE(dl || g.r_d == tb.b_d);
    EXPECT_TRUE(tl || g.r_t == tb.b_t);
    observed[(dl ? 0 : 2) + (tl ? 0 : 1)] += 1.0;
  }
  const std::array<double, 4> expected{tb.rho, 0.5 - tb.rho, 0.5 - tb.rho, tb.rho};
  double chi2 = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double e = expected[c] * 10000.0;
    chi2 += (observed[c] - e) * (observed[c] - e) / e;
  }
  EXPECT_LT(chi2, 16.27);
}

TEST_F(GeneratorTest, PairsAreWellFormedAndDeterministic) {
  const auto spec = make_benchmark_spec(0.3, 50, 50, 100, 9);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto g = generate_pair_detailed(spec, *pool_, i);
    const auto& p = g.pair;
    EXPECT_GE(p.d.size(), 50);
    EXPECT_LE(p.d.size(), 100);
    EXPECT_GE(p.t.size(), 50);
    EXPECT_LE(p.t.size(), 100);
    EXPECT_DOUBLE_EQ(*p.truth_bits, table_mi(spec.table.rho));
    int parity = 0;
    for (auto l : p.d.labels()) parity ^= l;
    EXPECT_EQ(parity, g.r_d < 0.5 ? 1 : 0);
    const auto again = generate_pair(spec, *pool_, i);
    EXPECT_EQ(again.d.features(), p.d.features());
    EXPECT_EQ(again.t.labels(), p.t.labels());
  }
  const auto other = make_benchmark_spec(0.3, 50, 50, 100, 10);
  EXPECT_NE(generate_pair(other, *pool_, 0).d.labels(), generate_pair(spec, *pool_, 0).d.labels());
}

TEST_F(GeneratorTest, RowsComeFromTheLabelledClass) {
  const auto spec = make_benchmark_spec(0.5, 5, 50, 60, 11);
  const auto p = generate_pair(spec, *pool_, 3);
  for (int i = 0; i < p.d.size(); ++i) {
    const Matrix& src = pool_->points(p.d.labels()[i]);
    bool found = false;
    for (int r = 0; r < src.rows() && !found; ++r) found = src.row(r) == p.d.features().row(i);
    EXPECT_TRUE(found);
  }
}

TEST(SynthCorpus, SeparationSixIsNearlySeparable) {
  Rng rng(46);
  const auto pool = synth_corpus(20, 2000, 6.0, rng);
  Matrix x(4000, 20);
  x.topRows(2000) = pool.points(0);
  x.bottomRows(2000) = pool.points(1);
  std::vector<std::uint8_t> y(4000, 0);
  std::fill(y.begin() + 2000, y.end(), 1);
  const EmbeddedDataset all(x, y);
  std::vector<int> train, test;
  for (int i = 0; i < 4000; ++i) (i % 4 == 0 ? train : test).push_back(i);
  const auto fit = laplace_fit(subset(all, train), PriorSpec(1.0, 20));
  const auto held = subset(all, test);
  int correct = 0;
  for (int i = 0; i < held.size(); ++i) {
    correct += ((held.features().row(i).dot(fit.mean()) >= 0.0) == (held.labels()[i] == 1));
  }
  EXPECT_GT(static_cast<double>(correct) / held.size(), 0.99);
}

TEST(CorpusPool, FromDatasetSplitsByLabel) {
  Matrix x(3, 1);
  x << 1, 2, 3;
  const auto pool = CorpusPool::from_dataset(EmbeddedDataset(x, {1, 0, 1}));
  EXPECT_EQ(pool.points(0).rows(), 1);
  EXPECT_EQ(pool.points(1).rows(), 2);
  EXPECT_EQ(pool.points(1)(1, 0), 3.0);
  EXPECT_THROW(CorpusPool::from_dataset(EmbeddedDataset(x, {1, 1, 1})), ValidationError);
}

}  // namespace
}  // namespace pmic
