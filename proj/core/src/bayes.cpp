#include "pmic/bayes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pmic/error.hpp"

namespace pmic {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

struct Evaluation {
  double objective;
  Vector gradient;
  Vector curvature;  // sigmoid_i (1 - sigmoid_i)
};

Evaluation evaluate(const Matrix& X, const Vector& y, const Vector& w, double c) {
  const Vector z = X * w;
  Vector residual(z.size());
  Vector curvature(z.size());
  double objective = 0.5 * w.squaredNorm() / c;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = sigmoid(z(i));
    residual(i) = s - y(i);
    curvature(i) = s * (1.0 - s);
    objective += softplus(z(i)) - y(i) * z(i);
  }
  Vector gradient = X.transpose() * residual + w / c;
  return {objective, std::move(gradient), std::move(curvature)};
}

Matrix hessian(const Matrix& X, const Vector& curvature, double c) {
  const auto d = X.cols();
  Matrix H = Matrix::Identity(d, d) / c;
  H.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose() * curvature.cwiseSqrt().asDiagonal());
  return H.selfadjointView<Eigen::Lower>();
}

}  // namespace

PriorSpec::PriorSpec(double c_in, int dim_in) : c(c_in), dim(dim_in) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ValidationError("prior scale c must be finite and positive, got " + std::to_string(c));
  }
  if (dim < 1) throw ValidationError("prior dimension must be >= 1");
}

GaussianDist PriorSpec::distribution() const { return GaussianDist::isotropic(Vector::Zero(dim), c); }

void FitSettings::validate() const {
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) { return -softplus(-z); }

double logistic_log_likelihood(const EmbeddedDataset& x, const Vector& w) {
  if (w.size() != x.dim()) throw ValidationError("weight/feature dimension mismatch");
  const Vector z = x.features() * w;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    ll += x.labels()[static_cast<std::size_t>(i)] ? log_sigmoid(z(i)) : log_sigmoid(-z(i));
  }
  return ll;
}

double logistic_objective(const EmbeddedDataset& x, const Vector& w, double c) {
  return -logistic_log_likelihood(x, w) + 0.5 * w.squaredNorm() / c;
}

LaplaceFit laplace_fit_detailed(const EmbeddedDataset& x, const PriorSpec& prior,
                                const FitSettings& settings) {
  settings.validate();
  if (x.dim() != prior.dim) {
    throw ValidationError("laplace_fit: data dimension " + std::to_string(x.dim()) +
                          " does not match prior dimension " + std::to_string(prior.dim));
  }
  const Matrix& X = x.features();
  const Vector y = x.label_vector();
  const double c = prior.c;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-10;
  const double eps = std::numeric_limits<double>::epsilon();

  // Rounding floor of the gradient.
  const double column_mass = X.cwiseAbs().colwise().sum().maxCoeff();
  Vector w = Vector::Zero(x.dim());
  Evaluation ev = evaluate(X, y, w, c);
  std::vector<double> trace{ev.objective};
  int iter = 0;
  for (;; ++iter) {
    if (!std::isfinite(ev.objective) || !ev.gradient.allFinite()) {
      throw NumericalError("laplace_fit: non-finite objective or gradient at iteration " +
                           std::to_string(iter));
    }
    const double gnorm = ev.gradient.lpNorm<Eigen::Infinity>();
    const double grad_floor = 64.0 * eps * (column_mass + w.lpNorm<Eigen::Infinity>() / c);
    if (gnorm <= std::max(settings.grad_tol, grad_floor)) {
      Matrix H = hessian(X, ev.curvature, c);
      return LaplaceFit{GaussianDist::from_precision(std::move(w), std::move(H)), iter, gnorm,
                        std::move(trace)};
    }
    if (iter >= settings.max_iter) {
      throw ConvergenceError("laplace_fit did not converge", iter, gnorm);
    }

    const Matrix H = hessian(X, ev.curvature, c);
    const Vector step = -H.llt().solve(ev.gradient);
    const double decrement = -ev.gradient.dot(step);

    // Decrement at the rounding level of E: pure Newton step.
    if (0.5 * decrement <= 1e-12 * std::max(1.0, std::abs(ev.objective))) {
      w += step;
      ev = evaluate(X, y, w, c);
      trace.push_back(ev.objective);
      continue;
    }

    double t = 1.0;
    for (;;) {
      Vector candidate = w + t * step;
      Evaluation next = evaluate(X, y, candidate, c);
      if (std::isfinite(next.objective) &&
          next.objective <= ev.objective - kArmijo * t * decrement) {
        w = std::move(candidate);
        ev = std::move(next);
        trace.push_back(ev.objective);
        break;
      }
      t *= 0.5;
      if (t < kMinStep) {
        throw ConvergenceError("laplace_fit line search stalled", iter, gnorm);
      }
    }
  }
}

GaussianDist conjugate_mean_fit(std::span<const double> samples, double noise_var,
                                const GaussianDist& prior) {
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw ValidationError("conjugate_mean_fit: noise_var must be finite and positive");
  }
  if (prior.dim() != 1) throw ValidationError("conjugate_mean_fit: prior must be one-dimensional");
  const double prior_precision = prior.precision()(0, 0);
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double precision = prior_precision + static_cast<double>(samples.size()) / noise_var;
  const double mean = (prior_precision * prior.mean()(0) + sum / noise_var) / precision;
  return GaussianDist::from_precision(Vector::Constant(1, mean), Matrix::Constant(1, 1, precision));
}

}  // namespace pmic
