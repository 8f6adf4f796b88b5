#pragma once

#include <span>
#include <vector>

#include "pmic/dataset.hpp"
#include "pmic/gaussian.hpp"

namespace pmic {

/// Isotropic zero-mean prior N(0, c * I) over logistic-regression weights.
/// `c` plays the role of the inverse L2 regularisation strength.
struct PriorSpec {
  double c = 1.0;
  int dim = 1;

  PriorSpec(double c_in, int dim_in);
  GaussianDist distribution() const;
};

/// Newton iteration budget and stopping rule (inf-norm of the gradient).
/// The model never fits an intercept; append a bias column to the data instead.
struct FitSettings {
  int max_iter = 5000;
  double grad_tol = 1e-8;

  void validate() const;
};

struct LaplaceFit {
  GaussianDist posterior;
  int iterations = 0;
  double grad_norm = 0.0;
  /// Negative log-joint after every accepted step, starting at w = 0.
  std::vector<double> objective_trace;
};

/// Laplace approximation to Bayesian logistic regression.
///
/// The mean is the MAP of E(w) = -log p(y | X, w) - log p(w) with
/// p(y | x, w) = Ber(y | sigmoid(w^T x)) and prior N(0, c I); the precision is
/// the Hessian of E at the MAP, X^T S X + I / c with
/// S = diag(sigmoid_i (1 - sigmoid_i)). Found by damped Newton iterations with
/// Armijo backtracking.
LaplaceFit laplace_fit_detailed(const EmbeddedDataset& x, const PriorSpec& prior,
                                const FitSettings& settings = {});

inline GaussianDist laplace_fit(const EmbeddedDataset& x, const PriorSpec& prior,
                                const FitSettings& settings = {}) {
  return laplace_fit_detailed(x, prior, settings).posterior;
}

/// log sigmoid(z), stable for large |z|.
double log_sigmoid(double z);
double sigmoid(double z);

/// sum_i log Ber(y_i | sigmoid(w^T x_i)).
double logistic_log_likelihood(const EmbeddedDataset& x, const Vector& w);

/// E(w) = -logistic_log_likelihood(x, w) + |w|^2 / (2c).
double logistic_objective(const EmbeddedDataset& x, const Vector& w, double c);

/// Exact posterior of an unknown mean theta given samples ~ N(theta, noise_var)
/// and a one-dimensional Gaussian prior.
GaussianDist conjugate_mean_fit(std::span<const double> samples, double noise_var,
                                const GaussianDist& prior);

}  // namespace pmic
