#include "pmic/conjugate_benchmark.hpp"

#include <cmath>
#include <numbers>

#include "pmic/bayes.hpp"
#include "pmic/error.hpp"
#include "pmic/rng.hpp"

namespace pmic {
namespace {

double squared_correlation(double prior_var, double noise_var, int n_d, int n_t) {
  const double vd = prior_var + noise_var / n_d;
  const double vt = prior_var + noise_var / n_t;
  return prior_var * prior_var / (vd * vt);
}

}  // namespace

ConjugateBenchmark ConjugateBenchmark::for_target_bits(double target_bits, double noise_var,
                                                       int n_d, int n_t, std::uint64_t seed) {
  if (!(target_bits > 0.0) || !std::isfinite(target_bits)) {
    throw ValidationError("conjugate benchmark target must be positive and finite");
  }
  ConjugateBenchmark bench;
  bench.noise_var = noise_var;
  bench.n_d = n_d;
  bench.n_t = n_t;
  bench.seed = seed;
  bench.prior_var = 1.0;
  bench.validate();

  // r^2 is increasing in prior_var; bracket then bisect in log space.
  const double target_r2 = 1.0 - std::pow(4.0, -target_bits);
  double lo = 1e-12;
  double hi = 1.0;
  while (squared_correlation(hi, noise_var, n_d, n_t) < target_r2) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (squared_correlation(mid, noise_var, n_d, n_t) < target_r2 ? lo : hi) = mid;
  }
  bench.prior_var = std::sqrt(lo * hi);
  return bench;
}

void ConjugateBenchmark::validate() const {
  if (!(prior_var > 0.0) || !(noise_var > 0.0)) {
    throw ValidationError("conjugate benchmark variances must be positive");
  }
  if (n_d < 1 || n_t < 1) throw ValidationError("conjugate benchmark sizes must be >= 1");
}

GaussianDist ConjugateBenchmark::prior() const {
  return GaussianDist::isotropic(Vector::Constant(1, prior_mean), prior_var);
}

double ConjugateBenchmark::truth_nats() const {
  return -0.5 * std::log1p(-squared_correlation(prior_var, noise_var, n_d, n_t));
}

double ConjugateBenchmark::truth_bits() const { return truth_nats() / std::numbers::ln2; }

namespace {

std::vector<double> draws(double theta, double noise_var, int n, Rng& rng) {
  std::normal_distribution<double> noise(0.0, std::sqrt(noise_var));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = theta + noise(rng);
  return out;
}

}  // namespace

ConjugatePair ConjugateBenchmark::generate(std::size_t index) const {
  Rng rng = substream(seed, "conjugate/pair", index);
  std::normal_distribution<double> prior_draw(prior_mean, std::sqrt(prior_var));
  const double theta = prior_draw(rng);
  ConjugatePair pair;
  pair.d = draws(theta, noise_var, n_d, rng);
  pair.t = draws(theta, noise_var, n_t, rng);
  return pair;
}

ConjugatePair ConjugateBenchmark::generate_independent(std::size_t index) const {
  Rng rng = substream(seed, "conjugate/independent-pair", index);
  std::normal_distribution<double> prior_draw(prior_mean, std::sqrt(prior_var));
  const double theta_d = prior_draw(rng);
  const double theta_t = prior_draw(rng);
  ConjugatePair pair;
  pair.d = draws(theta_d, noise_var, n_d, rng);
  pair.t = draws(theta_t, noise_var, n_t, rng);
  return pair;
}

double ConjugateBenchmark::pmi(const ConjugatePair& pair) const {
  const GaussianDist p = prior();
  return pmi_gaussian(conjugate_mean_fit(pair.d, noise_var, p),
                      conjugate_mean_fit(pair.t, noise_var, p), p)
      .value;
}

}  // namespace pmic
