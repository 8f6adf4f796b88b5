#include "pmic/gaussian.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "pmic/error.hpp"

namespace pmic {
namespace {

std::atomic<std::uint64_t> g_jitter_events{0};

double logdet_from_llt(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

GaussianDist::GaussianDist(Vector mean, Matrix precision, Eigen::LLT<Matrix> llt, double logdet)
    : mean_(std::move(mean)),
      precision_(std::move(precision)),
      llt_(std::move(llt)),
      logdet_precision_(logdet) {}

GaussianDist GaussianDist::from_precision(Vector mean, Matrix precision) {
  const auto d = mean.size();
  if (d < 1) throw ValidationError("Gaussian dimension must be >= 1");
  if (precision.rows() != d || precision.cols() != d) {
    throw ValidationError("precision is " + std::to_string(precision.rows()) + "x" +
                          std::to_string(precision.cols()) + " but mean has length " +
                          std::to_string(d));
  }
  if (!mean.allFinite() || !precision.allFinite()) {
    throw NumericalError("Gaussian parameters contain non-finite values");
  }
  const double scale = precision.cwiseAbs().maxCoeff();
  const double asym = (precision - precision.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1.0)) {
    throw ValidationError("precision matrix is not symmetric (max asymmetry " +
                          std::to_string(asym) + ")");
  }
  precision = 0.5 * (precision + precision.transpose()).eval();

  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-10 * precision.trace() / static_cast<double>(d);
    precision.diagonal().array() += jitter;
    llt.compute(precision);
    g_jitter_events.fetch_add(1, std::memory_order_relaxed);
    if (llt.info() != Eigen::Success || !(jitter > 0.0)) {
      throw NumericalError("precision matrix is not positive definite");
    }
  }
  const double logdet = logdet_from_llt(llt);
  return GaussianDist(std::move(mean), std::move(precision), std::move(llt), logdet);
}

GaussianDist GaussianDist::from_covariance(Vector mean, const Matrix& covariance) {
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance matrix is not positive definite");
  }
  Matrix precision = llt.solve(Matrix::Identity(covariance.rows(), covariance.cols()));
  precision = 0.5 * (precision + precision.transpose()).eval();
  return from_precision(std::move(mean), std::move(precision));
}

GaussianDist GaussianDist::isotropic(const Vector& mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ValidationError("isotropic Gaussian needs a finite positive variance");
  }
  const auto d = mean.size();
  return from_precision(mean, Matrix::Identity(d, d) / variance);
}

Matrix GaussianDist::covariance() const {
  return llt_.solve(Matrix::Identity(dim(), dim()));
}

double log_density(const GaussianDist& g, const Vector& w) {
  if (w.size() != g.dim()) {
    throw ValidationError("log_density: point has length " + std::to_string(w.size()) +
                          ", distribution has dimension " + std::to_string(g.dim()));
  }
  const Vector diff = w - g.mean();
  const double quad = diff.dot(g.precision() * diff);
  return -0.5 * quad + 0.5 * g.logdet_precision() -
         0.5 * static_cast<double>(g.dim()) * std::log(2.0 * std::numbers::pi);
}

double kl_gaussian(const GaussianDist& p, const GaussianDist& q) {
  if (p.dim() != q.dim()) {
    throw ValidationError("kl_gaussian: dimension mismatch (" + std::to_string(p.dim()) +
                          " vs " + std::to_string(q.dim()) + ")");
  }
  // tr(Λq Σp) = tr(Λp^{-1} Λq)
  const double trace = p.cholesky().solve(q.precision()).trace();
  const Vector diff = q.mean() - p.mean();
  const double quad = diff.dot(q.precision() * diff);
  const double kl = 0.5 * (trace + quad - static_cast<double>(p.dim()) + p.logdet_precision() -
                           q.logdet_precision());
  return kl > 0.0 ? kl : 0.0;
}

Matrix sample(const GaussianDist& g, Rng& rng, int count) {
  if (count < 1) throw ValidationError("sample: count must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(g.dim(), count);
  for (int c = 0; c < count; ++c) {
    for (int j = 0; j < g.dim(); ++j) z(j, c) = normal(rng);
  }
  // Λ = L Lᵀ, so L^{-T} z has covariance Λ^{-1}.
  Matrix draws = g.cholesky().matrixU().solve(z);
  draws.colwise() += g.mean();
  return draws.transpose();
}

std::uint64_t jitter_events() noexcept {
  return g_jitter_events.load(std::memory_order_relaxed);
}

}  // namespace pmic
