#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pmic/dataset.hpp"
#include "pmic/gaussian.hpp"
#include "pmic/rng.hpp"

namespace pmic::testing {

inline Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

/// A A^T / d + floor * I with Gaussian A.
inline Matrix random_spd(int d, Rng& rng, double floor = 0.5) {
  const Matrix a = random_matrix(d, d, rng);
  return a * a.transpose() / d + floor * Matrix::Identity(d, d);
}

inline Vector random_vector(int d, Rng& rng, double scale = 1.0) {
  return scale * random_matrix(d, 1, rng).col(0);
}

/// Prior N(m0, Λ0^{-1}) with two "posteriors" whose precisions exceed Λ0, so
/// the derived joint precision Λa + Λb − Λ0 is positive definite.
struct GaussianTriple {
  GaussianDist prior;
  GaussianDist post_d;
  GaussianDist post_t;
};

inline GaussianTriple random_triple(int d, Rng& rng) {
  const Matrix l0 = random_spd(d, rng);
  const Matrix la = l0 + random_spd(d, rng, 0.1);
  const Matrix lb = l0 + random_spd(d, rng, 0.1);
  return {GaussianDist::from_precision(random_vector(d, rng, 0.5), l0),
          GaussianDist::from_precision(random_vector(d, rng), la),
          GaussianDist::from_precision(random_vector(d, rng), lb)};
}

/// Labelled data from a random logistic model.
inline EmbeddedDataset random_logistic_data(int n, int d, Rng& rng, double scale = 1.0) {
  const Matrix x = random_matrix(n, d, rng);
  const Vector w = random_vector(d, rng, scale);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-x.row(i).dot(w)));
    y[static_cast<std::size_t>(i)] = u(rng) < p ? 1 : 0;
  }
  return EmbeddedDataset(x, std::move(y));
}

/// Composite Simpson rule on [a, b] with n (even) intervals.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// log p(t|d) - log p(t) for the 1-D conjugate model, each evidence by
/// Simpson over theta on the prior mean +- 20 prior sd.
inline double conjugate_pmi_by_quadrature(const std::vector<double>& d, const std::vector<double>& t,
                                          double m0, double v0, double noise) {
  const double log2pi = std::log(2.0 * std::numbers::pi);
  auto log_lik = [&](const std::vector<double>& s, double th) {
    double l = 0.0;
    for (double x : s) l -= 0.5 * (x - th) * (x - th) / noise + 0.5 * (log2pi + std::log(noise));
    return l;
  };
  constexpr int n = 40000;
  const double half = 20.0 * std::sqrt(v0);
  const double h = 2.0 * half / n;
  auto log_evidence = [&](bool use_d, bool use_t) {
    std::vector<double> l(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double th = m0 - half + i * h;
      l[i] = -0.5 * (th - m0) * (th - m0) / v0 - 0.5 * (log2pi + std::log(v0));
      if (use_d) l[i] += log_lik(d, th);
      if (use_t) l[i] += log_lik(t, th);
    }
    const double top = *std::max_element(l.begin(), l.end());
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * std::exp(l[i] - top);
    }
    return top + std::log(s * h / 3.0);
  };
  return log_evidence(true, true) - log_evidence(true, false) - log_evidence(false, true);
}

}  // namespace pmic::testing
