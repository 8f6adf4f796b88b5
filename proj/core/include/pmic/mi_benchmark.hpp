#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmic/dataset.hpp"
#include "pmic/rng.hpp"

namespace pmic {

/// 2x2 joint distribution over the label-0 proportions (r_D, r_T):
///
///              r_D = a_d    r_D = b_d
///   r_T = a_t    rho        1/2 - rho
///   r_T = b_t  1/2 - rho      rho
///
/// a_* in {0.1, ..., 0.4}, b_* in {0.6, ..., 0.9}, rho in [0.25, 0.5].
struct JointTable {
  double a_d = 0.1;
  double b_d = 0.9;
  double a_t = 0.1;
  double b_t = 0.9;
  double rho = 0.25;

  void validate() const;
};

struct BenchmarkSpec {
  double target_bits = 0.0;
  JointTable table;
  int k = 1;
  int size_min = 50;
  int size_max = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-class point collections that benchmark labels are materialised from.
class CorpusPool {
 public:
  CorpusPool(Matrix class0, Matrix class1);
  /// Splits a labelled dataset by label.
  static CorpusPool from_dataset(const EmbeddedDataset& x);

  int dim() const noexcept { return static_cast<int>(class0_.cols()); }
  const Matrix& points(int label) const { return label ? class1_ : class0_; }

 private:
  Matrix class0_;
  Matrix class1_;
};

/// Mutual information (bits) of the joint table with uniform marginals:
///   2 rho log2(4 rho) + (1 - 2 rho) log2(2 (1 - 2 rho)),  0 log 0 = 0.
double table_mi(double rho);

/// The unique rho in [0.25, 0.5] with |table_mi(rho) - target_bits| <= tol (bisection).
double solve_rho(double target_bits, double tol = 1e-12);

/// n labels; each of the first n-1 is 0 with probability r. With
/// `encode_parity`, the last label is chosen so the XOR of all n labels is
/// 1 exactly when r < 0.5; otherwise it is drawn like the others.
std::vector<std::uint8_t> sample_label_vector(double r, int n, bool encode_parity, Rng& rng);

/// Draws a_d, a_t from {0.1..0.4} and b_d, b_t from {0.6..0.9} uniformly.
JointTable draw_joint_table(double rho, Rng& rng);

/// Spec for one MI level: solves rho and draws the table from the
/// "benchmark/table" substream of `seed`.
BenchmarkSpec make_benchmark_spec(double target_bits, int k, int size_min, int size_max,
                                  std::uint64_t seed);

struct GeneratedPair {
  DatasetPair pair;
  double r_d;
  double r_t;
};

/// Pair `pair_index` of the level. Deterministic in (spec.seed, pair_index);
/// pool points are drawn with replacement. truth_bits = table_mi(rho).
GeneratedPair generate_pair_detailed(const BenchmarkSpec& spec, const CorpusPool& pool,
                                     std::size_t pair_index, bool encode_parity = true);

inline DatasetPair generate_pair(const BenchmarkSpec& spec, const CorpusPool& pool,
                                 std::size_t pair_index) {
  return generate_pair_detailed(spec, pool, pair_index).pair;
}

/// Two Gaussian classes N(-(sep/2) u, I) and N(+(sep/2) u, I) for a random unit u.
CorpusPool synth_corpus(int dim, int per_class, double class_separation, Rng& rng);

}  // namespace pmic
