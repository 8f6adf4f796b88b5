#pragma once

#include <functional>
#include <span>
#include <string_view>

#include "pmic/bayes.hpp"
#include "pmic/dataset.hpp"
#include "pmic/gaussian.hpp"
#include "pmic/rng.hpp"

namespace pmic {

/// How a PMI value was obtained.
enum class PmiPath {
  kGaussianClosedForm,  ///< two posteriors + prior, joint derived in closed form
  kEtaPoint,            ///< four log-densities at eta; joint fitted on the union
  kMonteCarlo,          ///< log-mean-exp of test likelihoods over parameter draws
};

std::string_view to_string(PmiPath path) noexcept;
/// Accepts "gaussian" / "eta" / "mc" and the long names from to_string.
PmiPath parse_pmi_path(std::string_view name);

/// Pointwise mutual information of a dataset pair, in nats.
struct PmiValue {
  double value = 0.0;
  Vector eta_used;
  PmiPath path = PmiPath::kGaussianClosedForm;
};

/// KL-form diagnostics of one PMI value. With exact Gaussian posteriors,
///   kl_joint_vs_prior - kl_joint_vs_post_d - kl_joint_vs_post_t == PMI.
/// js_dual is the dual skew G-Jensen-Shannon divergence (alpha = 1/2) between
/// the two posteriors, and confidence_gain = (logdet Λ_joint - logdet Λ_0) / 2.
struct PmiDecomposition {
  double kl_joint_vs_prior = 0.0;
  double kl_joint_vs_post_d = 0.0;
  double kl_joint_vs_post_t = 0.0;
  double js_dual = 0.0;
  double confidence_gain = 0.0;

  /// The KL identity's right-hand side.
  double kl_form() const noexcept {
    return kl_joint_vs_prior - kl_joint_vs_post_d - kl_joint_vs_post_t;
  }
  /// Flat-prior approximation: confidence_gain - 2 js_dual - dim log 2.
  double jensen_form(int dim) const noexcept;
};

/// p(w | d, t) from p(w | d), p(w | t) and p(w), assuming d and t are
/// conditionally independent given w:
///   Λ = Λa + Λb − Λ0,  μ = Λ^{-1} (Λa μa + Λb μb − Λ0 μ0).
/// Throws JointPosteriorUndefined when Λ is not positive definite.
GaussianDist joint_posterior(const GaussianDist& post_d, const GaussianDist& post_t,
                             const GaussianDist& prior);

/// Closed-form PMI for Gaussian posteriors, evaluated at eta = 0 entirely in
/// precision form.
PmiValue pmi_gaussian(const GaussianDist& post_d, const GaussianDist& post_t,
                      const GaussianDist& prior);

/// log p(eta|d) + log p(eta|t) − log p(eta) − log p(eta|d,t). Independent of eta
/// whenever post_joint is the exact joint posterior.
PmiValue pmi_at_eta(const GaussianDist& post_d, const GaussianDist& post_t,
                    const GaussianDist& post_joint, const GaussianDist& prior, const Vector& eta);

/// log mean exp over `values`; throws UnderflowError if every value is −inf.
double log_mean_exp(std::span<const double> values);

struct MonteCarloPmi {
  PmiValue pmi;
  /// Delta-method standard error of the estimate.
  double std_error = 0.0;
};

/// Generic Monte-Carlo estimate of log p(t | d) − log p(t):
///   log mean_{w ~ post_d} exp(loglik(w)) − log mean_{w ~ prior} exp(loglik(w)).
/// Draws `n_samples` from post_d, then `n_samples` from prior, from `rng`.
MonteCarloPmi monte_carlo_pmi(const GaussianDist& post_d, const GaussianDist& prior,
                              const std::function<double(const Vector&)>& test_log_likelihood,
                              int n_samples, Rng& rng);

/// Monte-Carlo PMI for the Laplace logistic model: fits p(w | d), then scores
/// the Bernoulli log-likelihood of t under posterior and prior draws.
PmiValue pmi_monte_carlo(const EmbeddedDataset& d, const EmbeddedDataset& t,
                         const PriorSpec& prior, const FitSettings& settings, int n_samples,
                         Rng& rng);

PmiDecomposition decompose(const GaussianDist& post_d, const GaussianDist& post_t,
                           const GaussianDist& prior);

}  // namespace pmic
