#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pmic/bayes.hpp"
#include "pmic/curation.hpp"
#include "pmic/dataset.hpp"
#include "pmic/error.hpp"
#include "pmic/mi_benchmark.hpp"
#include "pmic/pmi.hpp"

namespace pmic {

struct HarnessOptions {
  PmiPath path = PmiPath::kGaussianClosedForm;
  FitSettings fit{};
  /// Append a constant-1 feature before fitting (bias absorbed into the weights).
  bool append_bias = false;
  int mc_samples = 2000;
  /// Master seed for curation and Monte-Carlo substreams.
  std::uint64_t seed = 0;
  int workers = 1;
  /// Skip pairs whose PMI fails instead of aborting; skipped pairs are listed.
  bool skip_failures = false;
};

/// A per-pair failure under the fail-fast policy.
class PairFailure : public NumericalError {
 public:
  PairFailure(std::size_t index, const std::string& cause)
      : NumericalError("pair " + std::to_string(index) + ": " + cause), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct MiEstimate {
  double mean_nats = 0.0;
  double mean_bits = 0.0;
  double std_nats = 0.0;  ///< sample standard deviation over pairs
  int k = 0;              ///< pairs that contributed
  PmiPath path = PmiPath::kGaussianClosedForm;
  std::vector<double> per_pair;  ///< nats, NaN where a pair was skipped
  std::vector<std::size_t> failed_pairs;
};

struct Dispersion {
  double mean = 0.0;
  double std = 0.0;
};

using PairSource = std::function<CurationPair(std::size_t index)>;

/// PMI (nats) of one already-curated pair along options.path.
PmiValue score_pair(const EmbeddedDataset& d, const EmbeddedDataset& t, double c,
                    const HarnessOptions& options, std::size_t pair_index);

/// Mean/std summary of per-pair PMI values; NaN entries are skipped pairs.
MiEstimate summarize(std::vector<double> per_pair, PmiPath path);

/// Curates every D_i with `method`, scores (D̂_i, T_i) and averages.
MiEstimate run_alg1(const PairSource& source, std::size_t k, const CurationMethod& method,
                    double c, const HarnessOptions& options);
MiEstimate run_alg1(std::span<const CurationPair> pairs, const CurationMethod& method, double c,
                    const HarnessOptions& options);
MiEstimate run_alg1(std::span<const DatasetPair> pairs, const CurationMethod& method, double c,
                    const HarnessOptions& options);

/// Fraction of `t` whose label matches 1[w^T x >= 0].
double classification_accuracy(const Vector& weights, const EmbeddedDataset& t);

/// Test-score evaluation: MAP-fit on each curated D̂_i, accuracy on T_i.
Dispersion score_test_accuracy(const PairSource& source, std::size_t k,
                               const CurationMethod& method, double c,
                               const HarnessOptions& options);

struct CurationOutcome {
  CurationMethod method;
  double c = 0.0;
  Dispersion delta_pmi;           ///< mean over pairs, std over outer-group means
  Dispersion delta_accuracy_pct;  ///< same, in percentage points
  int k = 0;                      ///< total pairs = k_inner * n_outer
  int n_outer = 0;
  std::vector<double> group_delta_pmi;
  std::vector<double> group_delta_accuracy_pct;
  std::vector<double> per_pair_pmi;
  std::vector<double> per_pair_accuracy;
};

/// For each method, Δ = score(method) − score(identity) on the same pairs, for
/// PMI and test accuracy. Pairs [g*k_inner, (g+1)*k_inner) form outer group g.
std::vector<CurationOutcome> curation_experiment(const PairSource& source, std::size_t k_inner,
                                                 std::size_t n_outer,
                                                 std::span<const CurationMethod> methods, double c,
                                                 const HarnessOptions& options);

/// Spearman rank correlation, 1 − 6 Σ d² / (m (m² − 1)) over average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

struct BenchmarkTemplate {
  int k = 500;
  int size_min = 50;
  int size_max = 100;
  std::uint64_t seed = 0;
};

struct LevelResult {
  double target_bits = 0.0;
  BenchmarkSpec spec;
  MiEstimate estimate;
};

struct RankReport {
  double spearman_rho = 0.0;
  std::vector<LevelResult> levels;  ///< ascending target_bits
};

/// Seed of one MI level, keyed on the target value rather than its list position.
std::uint64_t level_seed(std::uint64_t master, double target_bits);

/// One spec per level, identity curation, Spearman between truth and estimate.
RankReport benchmark_experiment(std::span<const double> levels, const BenchmarkTemplate& tmpl,
                                const CorpusPool& pool, double c, const HarnessOptions& options);

struct ConvergencePoint {
  std::size_t k = 0;
  double mse = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// `pmi_nats(i)` must return the PMI of pair i of an infinite pair stream.
/// For each k, `replications` disjoint blocks of k pairs are averaged and
/// compared with truth_bits; the 95% interval is normal-approximate over
/// replications.
std::vector<ConvergencePoint> convergence_study(
    const std::function<double(std::size_t)>& pmi_nats, double truth_bits,
    std::span<const std::size_t> k_grid, int replications, int workers);

}  // namespace pmic
