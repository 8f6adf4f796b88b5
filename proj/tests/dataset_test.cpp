#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "pmic/dataset.hpp"
#include "pmic/error.hpp"
#include "support.hpp"

namespace pmic {
namespace {

EmbeddedDataset rows(std::initializer_list<std::initializer_list<double>> values,
                     std::vector<std::uint8_t> labels) {
  Matrix m(static_cast<Eigen::Index>(values.size()),
           static_cast<Eigen::Index>(values.begin()->size()));
  int i = 0;
  for (const auto& r : values) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return EmbeddedDataset(m, std::move(labels));
}

bool same(const EmbeddedDataset& a, const EmbeddedDataset& b) {
  return a.dim() == b.dim() && a.features() == b.features() && a.labels() == b.labels() &&
         a.maybe_tags() == b.maybe_tags();
}

TEST(Dataset, RejectsBadConstruction) {
  EXPECT_THROW(EmbeddedDataset(0), ValidationError);
  EXPECT_THROW(EmbeddedDataset(Matrix::Zero(2, 2), {0}), ValidationError);
  EXPECT_THROW(EmbeddedDataset(Matrix::Zero(1, 2), {2}), ValidationError);
  Matrix nan = Matrix::Zero(1, 2);
  nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(EmbeddedDataset(nan, {0}), ValidationError);
  Matrix inf = Matrix::Zero(1, 2);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(EmbeddedDataset(inf, {1}), ValidationError);
  EXPECT_THROW(EmbeddedDataset(Matrix::Zero(1, 2), {1}, std::vector<CategoryTag>{}),
               ValidationError);
  EXPECT_THROW(EmbeddedDataset(Matrix::Zero(1, 2), {1}, std::vector<CategoryTag>{{2, 0}}),
               ValidationError);
}

TEST(Dataset, CategoryIndex) {
  for (int c = 0; c < kNumCategories; ++c) EXPECT_EQ(CategoryTag::from_category(c).category(), c);
  EXPECT_EQ((CategoryTag{1, 0}).category(), 2);
  EXPECT_THROW(CategoryTag::from_category(4), ValidationError);
}

TEST(Dataset, TagsRequiredWhenAsked) {
  const auto x = rows({{1, 2}}, {1});
  EXPECT_FALSE(x.has_tags());
  EXPECT_THROW(x.tags(), ValidationError);
  EXPECT_THROW(x.category_counts(), ValidationError);
}

TEST(Dataset, PairRejectsDimensionMismatch) {
  EXPECT_THROW(DatasetPair(EmbeddedDataset(2), EmbeddedDataset(3)), ValidationError);
  EXPECT_THROW(DatasetPair(EmbeddedDataset(2), EmbeddedDataset(2), -0.5), ValidationError);
}

TEST(Concat, EmptyIsIdentity) {
  const auto x = rows({{1, 2}, {3, 4}}, {0, 1});
  EXPECT_TRUE(same(concat(EmbeddedDataset(2), x), x));
  EXPECT_TRUE(same(concat(x, EmbeddedDataset(2)), x));
}

TEST(Concat, RowsOfFirstComeFirst) {
  const auto a = rows({{1, 2, 3}, {4, 5, 6}}, {0, 1});
  const auto b = rows({{7, 8, 9}}, {1});
  const auto c = concat(a, b);
  ASSERT_EQ(c.size(), 3);
  EXPECT_EQ(c.features().row(0), a.features().row(0));
  EXPECT_EQ(c.features().row(2), b.features().row(0));
  EXPECT_EQ(c.labels(), (std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(Concat, DimensionMismatchNamesBoth) {
  try {
    concat(EmbeddedDataset(2), EmbeddedDataset(5));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find('2'), std::string::npos);
    EXPECT_NE(what.find('5'), std::string::npos);
  }
}

TEST(Concat, TagsSurviveOnlyWhenBothHaveThem) {
  const EmbeddedDataset tagged(Matrix::Ones(1, 2), {1}, std::vector<CategoryTag>{{1, 1}});
  const auto untagged = rows({{0, 0}}, {0});
  EXPECT_TRUE(concat(tagged, tagged).has_tags());
  EXPECT_FALSE(concat(tagged, untagged).has_tags());
}

TEST(Concat, AssociativeAndLabelsConcatenate) {
  Rng rng(1);
  const auto a = testing::random_logistic_data(3, 4, rng);
  const auto b = testing::random_logistic_data(5, 4, rng);
  const auto c = testing::random_logistic_data(2, 4, rng);
  EXPECT_TRUE(same(concat(concat(a, b), c), concat(a, concat(b, c))));
  std::vector<std::uint8_t> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  EXPECT_EQ(concat(a, b).labels(), labels);
}

TEST(Subset, Basics) {
  const auto x = rows({{1, 1}, {2, 2}, {3, 3}}, {0, 1, 0});
  const std::vector<int> all{0, 1, 2};
  EXPECT_TRUE(same(subset(x, all), x));
  EXPECT_EQ(subset(x, std::vector<int>{}).size(), 0);
  EXPECT_EQ(subset(x, std::vector<int>{}).dim(), 2);
  const auto s = subset(x, std::vector<int>{2, 0});
  ASSERT_EQ(s.size(), 2);
  EXPECT_EQ(s.features()(0, 0), 1.0);
  EXPECT_EQ(s.features()(1, 0), 3.0);
  EXPECT_THROW(subset(x, std::vector<int>{3}), ValidationError);
  EXPECT_THROW(subset(x, std::vector<int>{-1}), ValidationError);
  EXPECT_THROW(subset(x, std::vector<int>{1, 1}), ValidationError);
}

TEST(Subset, CommutesWithConcatOnDisjointBlocks) {
  Rng rng(2);
  const auto a = testing::random_logistic_data(4, 3, rng);
  const auto b = testing::random_logistic_data(5, 3, rng);
  const std::vector<int> ka{0, 3};
  const std::vector<int> kb{1, 2, 4};
  std::vector<int> joint{0, 3};
  for (int i : kb) joint.push_back(i + a.size());
  EXPECT_TRUE(same(subset(concat(a, b), joint), concat(subset(a, ka), subset(b, kb))));
}

TEST(Replicate, Basics) {
  const auto x = rows({{1, 1}, {2, 2}}, {0, 1});
  EXPECT_TRUE(same(replicate(x, std::vector<int>{1, 1}), x));
  EXPECT_EQ(replicate(x, std::vector<int>{0, 0}).size(), 0);
  const auto r = replicate(x, std::vector<int>{2, 0});
  ASSERT_EQ(r.size(), 2);
  EXPECT_EQ(r.features().row(0), x.features().row(0));
  EXPECT_EQ(r.features().row(1), x.features().row(0));
  EXPECT_THROW(replicate(x, std::vector<int>{1}), ValidationError);
  EXPECT_THROW(replicate(x, std::vector<int>{1, -1}), ValidationError);
}

TEST(Replicate, IdentityReplicationIsIdempotent) {
  Rng rng(3);
  const auto x = testing::random_logistic_data(6, 2, rng);
  const std::vector<int> counts{0, 3, 1, 2, 0, 1};
  const auto once = replicate(x, counts);
  const std::vector<int> ones(static_cast<std::size_t>(once.size()), 1);
  EXPECT_TRUE(same(replicate(once, ones), once));
}

TEST(Dataset, BiasColumnAndFlips) {
  const auto x = rows({{1, 2}, {3, 4}}, {0, 1});
  const auto b = with_bias_column(x);
  EXPECT_EQ(b.dim(), 3);
  EXPECT_EQ(b.features().col(2), Vector::Ones(2));
  const auto f = with_flipped_labels(x, std::vector<int>{1});
  EXPECT_EQ(f.labels(), (std::vector<std::uint8_t>{0, 0}));
  EXPECT_THROW(with_flipped_labels(x, std::vector<int>{2}), ValidationError);
}

TEST(Dataset, CategoryCounts) {
  const EmbeddedDataset x(Matrix::Zero(4, 2), {0, 0, 1, 1},
                          std::vector<CategoryTag>{{0, 0}, {0, 1}, {1, 0}, {1, 0}});
  EXPECT_EQ(x.category_counts(), (std::array<int, 4>{1, 1, 2, 0}));
}

}  // namespace
}  // namespace pmic
