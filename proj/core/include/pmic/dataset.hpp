#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pmic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Essential class (the label-determining factor) and a binary non-essential
/// feature such as background colour or corruption type.
struct CategoryTag {
  std::uint8_t essential_class = 0;
  std::uint8_t nonessential_feature = 0;

  /// Category index in [0, 4): 2 * essential_class + nonessential_feature.
  int category() const noexcept { return 2 * essential_class + nonessential_feature; }
  static CategoryTag from_category(int category);

  friend bool operator==(const CategoryTag&, const CategoryTag&) = default;
};

inline constexpr int kNumCategories = 4;

/// n×d feature matrix with binary labels and optional category tags.
/// Immutable after construction; every constructor path validates.
class EmbeddedDataset {
 public:
  /// Empty dataset of dimension `dim`.
  explicit EmbeddedDataset(int dim);
  EmbeddedDataset(Matrix features, std::vector<std::uint8_t> labels,
                  std::optional<std::vector<CategoryTag>> tags = std::nullopt);

  int size() const noexcept { return static_cast<int>(features_.rows()); }
  int dim() const noexcept { return static_cast<int>(features_.cols()); }
  bool empty() const noexcept { return size() == 0; }
  bool has_tags() const noexcept { return tags_.has_value(); }

  const Matrix& features() const noexcept { return features_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  /// Throws ValidationError when the dataset carries no tags.
  const std::vector<CategoryTag>& tags() const;
  const std::optional<std::vector<CategoryTag>>& maybe_tags() const noexcept { return tags_; }

  /// Labels as a real vector (0.0 / 1.0).
  Vector label_vector() const;

  /// Per-category row counts; requires tags.
  std::array<int, kNumCategories> category_counts() const;

 private:
  Matrix features_;
  std::vector<std::uint8_t> labels_;
  std::optional<std::vector<CategoryTag>> tags_;
};

struct DatasetPair {
  EmbeddedDataset d;
  EmbeddedDataset t;
  std::optional<double> truth_bits;

  DatasetPair(EmbeddedDataset d_in, EmbeddedDataset t_in,
              std::optional<double> truth = std::nullopt);
};

/// Rows of `a` followed by rows of `b`. Tags survive only when both inputs have them.
EmbeddedDataset concat(const EmbeddedDataset& a, const EmbeddedDataset& b);

/// Rows at `keep` (any order, no duplicates) in ascending original order.
EmbeddedDataset subset(const EmbeddedDataset& x, std::span<const int> keep);

/// counts[i] copies of row i, emitted in row order.
EmbeddedDataset replicate(const EmbeddedDataset& x, std::span<const int> counts);

/// Same dataset with a constant 1.0 feature appended as the last column.
/// Absorbs the bias term for models fitted without an intercept.
EmbeddedDataset with_bias_column(const EmbeddedDataset& x);

/// Copy with the labels at `indices` inverted.
EmbeddedDataset with_flipped_labels(const EmbeddedDataset& x, std::span<const int> indices);

}  // namespace pmic
