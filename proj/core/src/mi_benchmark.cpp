#include "pmic/mi_benchmark.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pmic/error.hpp"

namespace pmic {
namespace {

constexpr std::array<double, 4> kLowGrid{0.1, 0.2, 0.3, 0.4};
constexpr std::array<double, 4> kHighGrid{0.6, 0.7, 0.8, 0.9};

double xlog2x_scaled(double p, double scale) {
  return p > 0.0 ? p * std::log2(scale * p) : 0.0;
}

}  // namespace

void JointTable::validate() const {
  const auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(a_d, 0.0, 0.5) || !in(a_t, 0.0, 0.5) || !in(b_d, 0.5, 1.0) || !in(b_t, 0.5, 1.0) ||
      a_d >= 0.5 || a_t >= 0.5 || b_d <= 0.5 || b_t <= 0.5 || a_d <= 0.0 || a_t <= 0.0 ||
      b_d >= 1.0 || b_t >= 1.0) {
    throw ValidationError("joint table needs 0 < a < 0.5 < b < 1");
  }
  if (!in(rho, 0.25, 0.5)) {
    throw ValidationError("rho must lie in [0.25, 0.5], got " + std::to_string(rho));
  }
}

void BenchmarkSpec::validate() const {
  table.validate();
  if (!(target_bits >= 0.0 && target_bits <= 1.0)) {
    throw ValidationError("target_bits must lie in [0, 1]");
  }
  if (k < 1) throw ValidationError("benchmark pair count k must be >= 1");
  if (size_min < 2 || size_max < size_min) {
    throw ValidationError("benchmark sizes need 2 <= size_min <= size_max");
  }
}

CorpusPool::CorpusPool(Matrix class0, Matrix class1)
    : class0_(std::move(class0)), class1_(std::move(class1)) {
  if (class0_.rows() == 0 || class1_.rows() == 0) {
    throw ValidationError("corpus pool needs at least one point of each class");
  }
  if (class0_.cols() != class1_.cols() || class0_.cols() < 1) {
    throw ValidationError("corpus pool classes have different dimensions");
  }
}

CorpusPool CorpusPool::from_dataset(const EmbeddedDataset& x) {
  std::vector<int> rows[2];
  for (int i = 0; i < x.size(); ++i) rows[x.labels()[static_cast<std::size_t>(i)]].push_back(i);
  Matrix parts[2];
  for (int c = 0; c < 2; ++c) {
    parts[c].resize(static_cast<Eigen::Index>(rows[c].size()), x.dim());
    for (std::size_t r = 0; r < rows[c].size(); ++r) {
      parts[c].row(static_cast<Eigen::Index>(r)) = x.features().row(rows[c][r]);
    }
  }
  return CorpusPool(std::move(parts[0]), std::move(parts[1]));
}

double table_mi(double rho) {
  if (!(rho >= 0.25 && rho <= 0.5)) {
    throw ValidationError("table_mi: rho must lie in [0.25, 0.5], got " + std::to_string(rho));
  }
  return 2.0 * xlog2x_scaled(rho, 4.0) + 2.0 * xlog2x_scaled(0.5 - rho, 4.0);
}

double solve_rho(double target_bits, double tol) {
  if (!(tol > 0.0)) throw ValidationError("solve_rho: tol must be positive");
  if (!(target_bits >= 0.0 && target_bits <= 1.0)) {
    throw ValidationError("solve_rho: target must lie in [0, 1] bits");
  }
  double lo = 0.25;
  double hi = 0.5;
  if (table_mi(lo) >= target_bits) return lo;
  if (table_mi(hi) <= target_bits) return hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double mi = table_mi(mid);
    if (std::abs(mi - target_bits) <= tol) break;
    (mi < target_bits ? lo : hi) = mid;
  }
  return mid;
}

std::vector<std::uint8_t> sample_label_vector(double r, int n, bool encode_parity, Rng& rng) {
  if (n < 2) throw ValidationError("sample_label_vector: n must be >= 2");
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("sample_label_vector: r must lie in (0, 1)");
  std::bernoulli_distribution is_zero(r);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
  std::uint8_t parity = 0;
  for (int i = 0; i < n - 1; ++i) {
    labels[static_cast<std::size_t>(i)] = is_zero(rng) ? 0 : 1;
    parity ^= labels[static_cast<std::size_t>(i)];
  }
  if (encode_parity) {
    labels.back() = static_cast<std::uint8_t>(parity ^ (r < 0.5 ? 1 : 0));
  } else {
    labels.back() = is_zero(rng) ? 0 : 1;
  }
  return labels;
}

JointTable draw_joint_table(double rho, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  JointTable table;
  table.a_d = kLowGrid[static_cast<std::size_t>(pick(rng))];
  table.a_t = kLowGrid[static_cast<std::size_t>(pick(rng))];
  table.b_d = kHighGrid[static_cast<std::size_t>(pick(rng))];
  table.b_t = kHighGrid[static_cast<std::size_t>(pick(rng))];
  table.rho = rho;
  table.validate();
  return table;
}

BenchmarkSpec make_benchmark_spec(double target_bits, int k, int size_min, int size_max,
                                  std::uint64_t seed) {
  BenchmarkSpec spec;
  spec.target_bits = target_bits;
  spec.k = k;
  spec.size_min = size_min;
  spec.size_max = size_max;
  spec.seed = seed;
  Rng rng = substream(seed, "benchmark/table");
  spec.table = draw_joint_table(solve_rho(target_bits), rng);
  spec.validate();
  return spec;
}

GeneratedPair generate_pair_detailed(const BenchmarkSpec& spec, const CorpusPool& pool,
                                     std::size_t pair_index, bool encode_parity) {
  spec.validate();
  Rng rng = substream(spec.seed, "benchmark/pair", pair_index);
  const JointTable& tb = spec.table;

  // Cells in order (a,a), (b,b), (b,a), (a,b) with masses rho, rho, 1/2-rho, 1/2-rho.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const bool d_low = u < tb.rho || u >= 0.5 + tb.rho;
  const bool t_low = u < tb.rho || (u >= 2.0 * tb.rho && u < 0.5 + tb.rho);
  const double r_d = d_low ? tb.a_d : tb.b_d;
  const double r_t = t_low ? tb.a_t : tb.b_t;

  std::uniform_int_distribution<int> size(spec.size_min, spec.size_max);
  const int n_d = size(rng);
  const int n_t = size(rng);
  const auto labels_d = sample_label_vector(r_d, n_d, encode_parity, rng);
  const auto labels_t = sample_label_vector(r_t, n_t, encode_parity, rng);

  const auto materialise = [&](const std::vector<std::uint8_t>& labels) {
    Matrix features(static_cast<Eigen::Index>(labels.size()), pool.dim());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const Matrix& source = pool.points(labels[i]);
      std::uniform_int_distribution<Eigen::Index> pick(0, source.rows() - 1);
      features.row(static_cast<Eigen::Index>(i)) = source.row(pick(rng));
    }
    return EmbeddedDataset(std::move(features), labels);
  };
  EmbeddedDataset d = materialise(labels_d);
  EmbeddedDataset t = materialise(labels_t);
  return GeneratedPair{DatasetPair(std::move(d), std::move(t), table_mi(tb.rho)), r_d, r_t};
}

CorpusPool synth_corpus(int dim, int per_class, double class_separation, Rng& rng) {
  if (dim < 1) throw ValidationError("synth_corpus: dim must be >= 1");
  if (per_class < 1) throw ValidationError("synth_corpus: per_class must be >= 1");
  if (!(class_separation >= 0.0)) throw ValidationError("synth_corpus: separation must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector direction(dim);
  for (int j = 0; j < dim; ++j) direction(j) = normal(rng);
  direction.normalize();
  const Vector offset = 0.5 * class_separation * direction;

  Matrix classes[2];
  for (int c = 0; c < 2; ++c) {
    classes[c].resize(per_class, dim);
    for (int i = 0; i < per_class; ++i) {
      for (int j = 0; j < dim; ++j) classes[c](i, j) = normal(rng);
      classes[c].row(i) += (c == 1 ? offset : Vector(-offset)).transpose();
    }
  }
  return CorpusPool(std::move(classes[0]), std::move(classes[1]));
}

}  // namespace pmic
