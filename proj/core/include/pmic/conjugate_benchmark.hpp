#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmic/gaussian.hpp"
#include "pmic/pmi.hpp"

namespace pmic {

struct ConjugatePair {
  std::vector<double> d;
  std::vector<double> t;
};

/// Model-consistent benchmark: theta ~ N(prior_mean, prior_var); d and t hold
/// n_d and n_t draws from N(theta, noise_var). Here the Gaussian posteriors are
/// exact, so the closed-form PMI is exact and its mean over pairs is an
/// unbiased estimate of I(d; t) = -1/2 log(1 - r^2) with
/// r^2 = prior_var^2 / ((prior_var + noise_var / n_d)(prior_var + noise_var / n_t)).
struct ConjugateBenchmark {
  double prior_mean = 0.0;
  double prior_var = 1.0;
  double noise_var = 1.0;
  int n_d = 1;
  int n_t = 1;
  std::uint64_t seed = 0;

  /// Chooses prior_var so that I(d; t) equals `target_bits` (> 0).
  static ConjugateBenchmark for_target_bits(double target_bits, double noise_var, int n_d, int n_t,
                                            std::uint64_t seed);

  void validate() const;
  GaussianDist prior() const;
  double truth_nats() const;
  double truth_bits() const;

  /// Pair `index`: one shared theta drives both datasets.
  ConjugatePair generate(std::size_t index) const;
  /// Pair `index` with independent thetas for d and t.
  ConjugatePair generate_independent(std::size_t index) const;
  /// Exact PMI (nats) through the closed-form Gaussian path.
  double pmi(const ConjugatePair& pair) const;
};

}  // namespace pmic
