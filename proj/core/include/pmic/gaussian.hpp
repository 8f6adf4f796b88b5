#pragma once

#include <cstdint>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "pmic/dataset.hpp"
#include "pmic/rng.hpp"

namespace pmic {

/// Multivariate normal held in precision form: N(mean, precision^{-1}).
///
/// The Cholesky factor of the precision and log det(precision) are computed
/// once at construction. When the factorisation fails, a jitter of
/// 1e-10 * trace / d is added to the diagonal once and the event is counted
/// (see jitter_events()); a second failure is a NumericalError.
class GaussianDist {
 public:
  static GaussianDist from_precision(Vector mean, Matrix precision);
  static GaussianDist from_covariance(Vector mean, const Matrix& covariance);
  /// N(mean, variance * I).
  static GaussianDist isotropic(const Vector& mean, double variance);

  int dim() const noexcept { return static_cast<int>(mean_.size()); }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& precision() const noexcept { return precision_; }
  double logdet_precision() const noexcept { return logdet_precision_; }
  const Eigen::LLT<Matrix>& cholesky() const noexcept { return llt_; }

  Matrix covariance() const;
  /// precision * mean
  Vector natural_mean() const { return precision_ * mean_; }
  /// mean^T precision mean
  double mahalanobis_mean() const { return mean_.dot(precision_ * mean_); }

 private:
  GaussianDist(Vector mean, Matrix precision, Eigen::LLT<Matrix> llt, double logdet);

  Vector mean_;
  Matrix precision_;
  Eigen::LLT<Matrix> llt_;
  double logdet_precision_;
};

/// log N(w; mean, precision^{-1}).
double log_density(const GaussianDist& g, const Vector& w);

/// Closed-form D_KL(p || q), clamped at zero against rounding.
double kl_gaussian(const GaussianDist& p, const GaussianDist& q);

/// `count` i.i.d. draws, one per row.
Matrix sample(const GaussianDist& g, Rng& rng, int count);

/// Number of Cholesky jitter fallbacks taken by this process so far.
std::uint64_t jitter_events() noexcept;

}  // namespace pmic
