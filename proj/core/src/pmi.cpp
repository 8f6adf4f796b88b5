#include "pmic/pmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pmic/error.hpp"

namespace pmic {
namespace {

void require_same_dim(const GaussianDist& a, const GaussianDist& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw ValidationError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

std::string_view to_string(PmiPath path) noexcept {
  switch (path) {
    case PmiPath::kGaussianClosedForm:
      return "gaussian-closed-form";
    case PmiPath::kEtaPoint:
      return "eta-point";
    case PmiPath::kMonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

PmiPath parse_pmi_path(std::string_view name) {
  if (name == "gaussian" || name == "gaussian-closed-form") return PmiPath::kGaussianClosedForm;
  if (name == "eta" || name == "eta-point") return PmiPath::kEtaPoint;
  if (name == "mc" || name == "monte-carlo") return PmiPath::kMonteCarlo;
  throw ValidationError("unknown PMI path '" + std::string(name) +
                        "' (expected gaussian, eta or mc)");
}

double PmiDecomposition::jensen_form(int dim) const noexcept {
  return confidence_gain - 2.0 * js_dual - static_cast<double>(dim) * std::numbers::ln2;
}

GaussianDist joint_posterior(const GaussianDist& post_d, const GaussianDist& post_t,
                             const GaussianDist& prior) {
  require_same_dim(post_d, post_t, "joint_posterior");
  require_same_dim(post_d, prior, "joint_posterior");
  Matrix precision = post_d.precision() + post_t.precision() - prior.precision();
  precision = 0.5 * (precision + precision.transpose()).eval();
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(precision, Eigen::EigenvaluesOnly);
    throw JointPosteriorUndefined(eig.eigenvalues().minCoeff());
  }
  const Vector natural = post_d.natural_mean() + post_t.natural_mean() - prior.natural_mean();
  Vector mean = llt.solve(natural);
  return GaussianDist::from_precision(std::move(mean), std::move(precision));
}

PmiValue pmi_gaussian(const GaussianDist& post_d, const GaussianDist& post_t,
                      const GaussianDist& prior) {
  const GaussianDist joint = joint_posterior(post_d, post_t, prior);
  const double logdet_term = post_d.logdet_precision() + post_t.logdet_precision() -
                             prior.logdet_precision() - joint.logdet_precision();
  const double quad_term = prior.mahalanobis_mean() + joint.mahalanobis_mean() -
                           post_d.mahalanobis_mean() - post_t.mahalanobis_mean();
  return PmiValue{0.5 * (logdet_term + quad_term), Vector::Zero(prior.dim()),
                  PmiPath::kGaussianClosedForm};
}

PmiValue pmi_at_eta(const GaussianDist& post_d, const GaussianDist& post_t,
                    const GaussianDist& post_joint, const GaussianDist& prior, const Vector& eta) {
  require_same_dim(post_d, post_t, "pmi_at_eta");
  require_same_dim(post_d, post_joint, "pmi_at_eta");
  require_same_dim(post_d, prior, "pmi_at_eta");
  const double value = log_density(post_d, eta) + log_density(post_t, eta) -
                       log_density(prior, eta) - log_density(post_joint, eta);
  return PmiValue{value, eta, PmiPath::kEtaPoint};
}

double log_mean_exp(std::span<const double> values) {
  if (values.empty()) throw ValidationError("log_mean_exp of an empty set");
  const double top = *std::max_element(values.begin(), values.end());
  if (top == -std::numeric_limits<double>::infinity()) {
    throw UnderflowError("numerical underflow: every log-likelihood is -inf");
  }
  if (!std::isfinite(top)) throw NumericalError("log_mean_exp: non-finite input");
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum / static_cast<double>(values.size()));
}

namespace {

// Variance of log(mean(exp(values))) by the delta method.
double log_mean_exp_variance(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += std::exp(v - top);
  mean /= n;
  double var = 0.0;
  for (double v : values) {
    const double e = std::exp(v - top) - mean;
    var += e * e;
  }
  var /= (n - 1.0);
  return var / (n * mean * mean);
}

}  // namespace

MonteCarloPmi monte_carlo_pmi(const GaussianDist& post_d, const GaussianDist& prior,
                              const std::function<double(const Vector&)>& test_log_likelihood,
                              int n_samples, Rng& rng) {
  if (n_samples < 2) throw ValidationError("monte_carlo_pmi needs n_samples >= 2");
  require_same_dim(post_d, prior, "monte_carlo_pmi");
  const Matrix post_draws = sample(post_d, rng, n_samples);
  const Matrix prior_draws = sample(prior, rng, n_samples);
  std::vector<double> ll_post(static_cast<std::size_t>(n_samples));
  std::vector<double> ll_prior(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    ll_post[static_cast<std::size_t>(s)] = test_log_likelihood(post_draws.row(s).transpose());
    ll_prior[static_cast<std::size_t>(s)] = test_log_likelihood(prior_draws.row(s).transpose());
  }
  const double value = log_mean_exp(ll_post) - log_mean_exp(ll_prior);
  const double se = std::sqrt(log_mean_exp_variance(ll_post) + log_mean_exp_variance(ll_prior));
  return MonteCarloPmi{PmiValue{value, Vector::Zero(prior.dim()), PmiPath::kMonteCarlo}, se};
}

PmiValue pmi_monte_carlo(const EmbeddedDataset& d, const EmbeddedDataset& t,
                         const PriorSpec& prior, const FitSettings& settings, int n_samples,
                         Rng& rng) {
  if (d.dim() != t.dim()) throw ValidationError("pmi_monte_carlo: dimension mismatch");
  if (t.empty()) return PmiValue{0.0, Vector::Zero(prior.dim), PmiPath::kMonteCarlo};
  const GaussianDist post_d = laplace_fit(d, prior, settings);
  const auto loglik = [&t](const Vector& w) { return logistic_log_likelihood(t, w); };
  return monte_carlo_pmi(post_d, prior.distribution(), loglik, n_samples, rng).pmi;
}

PmiDecomposition decompose(const GaussianDist& post_d, const GaussianDist& post_t,
                           const GaussianDist& prior) {
  const GaussianDist joint = joint_posterior(post_d, post_t, prior);

  // Geometric mean G ∝ sqrt(p_a p_b): precision (Λa + Λb) / 2,
  // mean (Λa + Λb)^{-1} (Λa μa + Λb μb).
  Matrix sum_precision = post_d.precision() + post_t.precision();
  const Vector g_mean = sum_precision.llt().solve(post_d.natural_mean() + post_t.natural_mean());
  const GaussianDist geometric = GaussianDist::from_precision(g_mean, 0.5 * sum_precision);

  PmiDecomposition out;
  out.kl_joint_vs_prior = kl_gaussian(joint, prior);
  out.kl_joint_vs_post_d = kl_gaussian(joint, post_d);
  out.kl_joint_vs_post_t = kl_gaussian(joint, post_t);
  out.js_dual = 0.5 * kl_gaussian(geometric, post_d) + 0.5 * kl_gaussian(geometric, post_t);
  out.confidence_gain = 0.5 * (joint.logdet_precision() - prior.logdet_precision());
  return out;
}

}  // namespace pmic
