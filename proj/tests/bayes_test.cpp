#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmic/bayes.hpp"
#include "pmic/error.hpp"
#include "support.hpp"

namespace pmic {
namespace {

double finite_difference_grad(const EmbeddedDataset& x, const Vector& w, double c, int j, double h) {
  Vector up = w, dn = w;
  up(j) += h;
  dn(j) -= h;
  return (logistic_objective(x, up, c) - logistic_objective(x, dn, c)) / (2.0 * h);
}

TEST(Sigmoid, StableTails) {
  EXPECT_NEAR(log_sigmoid(0.0), -std::log(2.0), 1e-15);
  EXPECT_NEAR(log_sigmoid(-800.0), -800.0, 1e-12);
  EXPECT_NEAR(log_sigmoid(800.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_TRUE(std::isfinite(log_sigmoid(-1e6)));
}

TEST(PriorSpec, Validates) {
  EXPECT_THROW(PriorSpec(0.0, 2), ValidationError);
  EXPECT_THROW(PriorSpec(-1.0, 2), ValidationError);
  EXPECT_THROW(PriorSpec(1.0, 0), ValidationError);
  const auto g = PriorSpec(4.0, 3).distribution();
  EXPECT_TRUE(g.precision().isApprox(0.25 * Matrix::Identity(3, 3)));
  EXPECT_TRUE(g.mean().isZero());
}

TEST(Laplace, EmptyDataReturnsPrior) {
  const PriorSpec prior(2.0, 3);
  const auto fit = laplace_fit(EmbeddedDataset(3), prior);
  EXPECT_TRUE(fit.mean().isZero());
  EXPECT_TRUE(fit.precision().isApprox(prior.distribution().precision()));
}

TEST(Laplace, OneDimensionalBisectionOracle) {
  Matrix x(1, 1);
  x << 1.0;
  const EmbeddedDataset data(x, {1});
  const auto fit = laplace_fit(data, PriorSpec(1.0, 1));

  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - (1.0 - 1.0 / (1.0 + std::exp(-mid)));
    (g > 0.0 ? hi : lo) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  const double s = 1.0 / (1.0 + std::exp(-mu));
  EXPECT_NEAR(fit.mean()(0), mu, 1e-10);
  EXPECT_NEAR(fit.precision()(0, 0), s * (1.0 - s) + 1.0, 1e-10);
}

TEST(Laplace, StationaryPointAndHessianMatchFiniteDifferences) {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + rep % 6;
    const auto data = testing::random_logistic_data(40, d, rng);
    const double c = 0.5 + rep;
    const auto fit = laplace_fit(data, PriorSpec(c, d));
    const Vector& w = fit.mean();
    for (int j = 0; j < d; ++j) {
      EXPECT_LE(std::abs(finite_difference_grad(data, w, c, j, 1e-5)), 1e-6);
    }
    const double h = 1e-4;
    for (int j = 0; j < d; ++j) {
      for (int l = 0; l < d; ++l) {
        Vector up = w, dn = w;
        up(l) += h;
        dn(l) -= h;
        const double fd = (finite_difference_grad(data, up, c, j, h) -
                           finite_difference_grad(data, dn, c, j, h)) /
                          (2.0 * h);
        EXPECT_NEAR(fd, fit.precision()(j, l), 1e-4 * std::max(1.0, std::abs(fit.precision()(j, l))));
      }
    }
  }
}

TEST(Laplace, PosteriorPrecisionDominatesPrior) {
  Rng rng(22);
  const auto data = testing::random_logistic_data(60, 5, rng, 2.0);
  const PriorSpec prior(3.0, 5);
  const auto fit = laplace_fit(data, prior);
  const Matrix diff = fit.precision() - prior.distribution().precision();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
}

TEST(Laplace, RowOrderInvariant) {
  Rng rng(23);
  const auto data = testing::random_logistic_data(50, 4, rng);
  std::vector<int> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix xp(50, 4);
  std::vector<std::uint8_t> yp(50);
  for (int i = 0; i < 50; ++i) {
    xp.row(i) = data.features().row(perm[i]);
    yp[i] = data.labels()[perm[i]];
  }
  const PriorSpec prior(1.0, 4);
  const auto a = laplace_fit(data, prior);
  const auto b = laplace_fit(EmbeddedDataset(xp, yp), prior);
  EXPECT_LT((a.mean() - b.mean()).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_LT((a.precision() - b.precision()).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(Laplace, ObjectiveTraceNonIncreasing) {
  Rng rng(24);
  const auto data = testing::random_logistic_data(80, 6, rng, 3.0);
  const auto fit = laplace_fit_detailed(data, PriorSpec(10.0, 6));
  ASSERT_GE(fit.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i) {
    EXPECT_LE(fit.objective_trace[i], fit.objective_trace[i - 1] + 1e-12);
  }
  EXPECT_LE(fit.grad_norm, 1e-8);
}

TEST(Laplace, SeparableDataStillConverges) {
  Matrix x(4, 2);
  x << 1, 0, 2, 0, -1, 0, -2, 0;
  const EmbeddedDataset data(x, {1, 1, 0, 0});
  const auto fit = laplace_fit_detailed(data, PriorSpec(100.0, 2));
  EXPECT_GT(fit.posterior.mean()(0), 0.0);
  EXPECT_NEAR(fit.posterior.mean()(1), 0.0, 1e-12);
}

TEST(Laplace, Validation) {
  const auto data = EmbeddedDataset(Matrix::Zero(2, 3), {0, 1});
  EXPECT_THROW(laplace_fit(data, PriorSpec(1.0, 2)), ValidationError);
  FitSettings bad;
  bad.max_iter = 0;
  EXPECT_THROW(laplace_fit(data, PriorSpec(1.0, 3), bad), ValidationError);
  FitSettings tiny;
  tiny.max_iter = 1;
  tiny.grad_tol = 1e-300;
  Rng rng(25);
  EXPECT_THROW(laplace_fit(testing::random_logistic_data(30, 3, rng), PriorSpec(1.0, 3), tiny),
               ConvergenceError);
}

TEST(Conjugate, HandExample) {
  const auto prior = GaussianDist::isotropic(Vector::Zero(1), 1.0);
  const double s[] = {2.0};
  const auto post = conjugate_mean_fit(s, 1.0, prior);
  EXPECT_NEAR(post.mean()(0), 1.0, 1e-15);
  EXPECT_NEAR(post.precision()(0, 0), 2.0, 1e-15);
}

TEST(Conjugate, SequentialUpdateEqualsBatch) {
  Rng rng(26);
  std::normal_distribution<double> z(0.3, 1.5);
  std::vector<double> all(12);
  for (auto& v : all) v = z(rng);
  const auto prior = GaussianDist::isotropic(Vector::Constant(1, -0.4), 2.0);
  const auto batch = conjugate_mean_fit(all, 0.7, prior);
  const auto first = conjugate_mean_fit(std::span(all).first(5), 0.7, prior);
  const auto second = conjugate_mean_fit(std::span(all).subspan(5), 0.7, first);
  EXPECT_NEAR(batch.mean()(0), second.mean()(0), 1e-12);
  EXPECT_NEAR(batch.precision()(0, 0), second.precision()(0, 0), 1e-12);
}

TEST(Conjugate, MatchesQuadrature) {
  Rng rng(27);
  std::normal_distribution<double> z(0.5, 1.0);
  std::vector<double> s(10);
  for (auto& v : s) v = z(rng);
  const double m0 = 0.2, v0 = 1.5, noise = 0.8;
  const auto post = conjugate_mean_fit(s, noise, GaussianDist::isotropic(Vector::Constant(1, m0), v0));

  auto log_unnorm = [&](double th) {
    double l = -0.5 * (th - m0) * (th - m0) / v0;
    for (double x : s) l -= 0.5 * (x - th) * (x - th) / noise;
    return l;
  };
  const double centre = post.mean()(0);
  const double ref = log_unnorm(centre);
  auto moment = [&](int k) {
    return testing::simpson(
        [&](double th) { return std::pow(th, k) * std::exp(log_unnorm(th) - ref); }, centre - 10.0,
        centre + 10.0, 20000);
  };
  const double z0 = moment(0);
  const double mean = moment(1) / z0;
  const double var = moment(2) / z0 - mean * mean;
  EXPECT_NEAR(post.mean()(0), mean, 1e-8);
  EXPECT_NEAR(1.0 / post.precision()(0, 0), var, 1e-8);
}

TEST(Conjugate, Validation) {
  const auto prior = GaussianDist::isotropic(Vector::Zero(1), 1.0);
  const double s[] = {1.0};
  EXPECT_THROW(conjugate_mean_fit(s, 0.0, prior), ValidationError);
  EXPECT_THROW(conjugate_mean_fit(s, 1.0, GaussianDist::isotropic(Vector::Zero(2), 1.0)),
               ValidationError);
}

}  // namespace
}  // namespace pmic
