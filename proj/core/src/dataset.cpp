#include "pmic/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmic/error.hpp"

namespace pmic {

CategoryTag CategoryTag::from_category(int category) {
  if (category < 0 || category >= kNumCategories) {
    throw ValidationError("category index out of range: " + std::to_string(category));
  }
  return CategoryTag{static_cast<std::uint8_t>(category / 2),
                     static_cast<std::uint8_t>(category % 2)};
}

EmbeddedDataset::EmbeddedDataset(int dim) : features_(0, dim) {
  if (dim < 1) {
    throw ValidationError("dataset dimension must be >= 1, got " + std::to_string(dim));
  }
}

EmbeddedDataset::EmbeddedDataset(Matrix features, std::vector<std::uint8_t> labels,
                                 std::optional<std::vector<CategoryTag>> tags)
    : features_(std::move(features)), labels_(std::move(labels)), tags_(std::move(tags)) {
  if (features_.cols() < 1) {
    throw ValidationError("dataset dimension must be >= 1");
  }
  const auto n = static_cast<std::size_t>(features_.rows());
  if (labels_.size() != n) {
    throw ValidationError("label count " + std::to_string(labels_.size()) +
                          " does not match row count " + std::to_string(n));
  }
  if (tags_ && tags_->size() != n) {
    throw ValidationError("tag count " + std::to_string(tags_->size()) +
                          " does not match row count " + std::to_string(n));
  }
  if (!features_.allFinite()) {
    throw ValidationError("feature matrix contains non-finite values");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] > 1) {
      throw ValidationError("label at row " + std::to_string(i) + " is " +
                            std::to_string(labels_[i]) + ", expected 0 or 1");
    }
  }
  if (tags_) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& tag = (*tags_)[i];
      if (tag.essential_class > 1 || tag.nonessential_feature > 1) {
        throw ValidationError("tag at row " + std::to_string(i) + " is not binary");
      }
    }
  }
}

const std::vector<CategoryTag>& EmbeddedDataset::tags() const {
  if (!tags_) {
    throw ValidationError("dataset has no category tags");
  }
  return *tags_;
}

Vector EmbeddedDataset::label_vector() const {
  Vector y(size());
  for (int i = 0; i < size(); ++i) {
    y(i) = labels_[static_cast<std::size_t>(i)];
  }
  return y;
}

std::array<int, kNumCategories> EmbeddedDataset::category_counts() const {
  std::array<int, kNumCategories> counts{};
  for (const auto& tag : tags()) {
    ++counts[static_cast<std::size_t>(tag.category())];
  }
  return counts;
}

DatasetPair::DatasetPair(EmbeddedDataset d_in, EmbeddedDataset t_in, std::optional<double> truth)
    : d(std::move(d_in)), t(std::move(t_in)), truth_bits(truth) {
  if (d.dim() != t.dim()) {
    throw ValidationError("dataset pair dimension mismatch: d has " + std::to_string(d.dim()) +
                          ", t has " + std::to_string(t.dim()));
  }
  if (truth_bits && !(*truth_bits >= 0.0)) {
    throw ValidationError("ground-truth MI must be >= 0");
  }
}

EmbeddedDataset concat(const EmbeddedDataset& a, const EmbeddedDataset& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("concat: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  Matrix features(a.size() + b.size(), a.dim());
  features.topRows(a.size()) = a.features();
  features.bottomRows(b.size()) = b.features();

  std::vector<std::uint8_t> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());

  std::optional<std::vector<CategoryTag>> tags;
  if (a.has_tags() && b.has_tags()) {
    tags = a.tags();
    tags->insert(tags->end(), b.tags().begin(), b.tags().end());
  }
  return EmbeddedDataset(std::move(features), std::move(labels), std::move(tags));
}

EmbeddedDataset subset(const EmbeddedDataset& x, std::span<const int> keep) {
  std::vector<int> rows(keep.begin(), keep.end());
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= x.size()) {
      throw ValidationError("subset: index " + std::to_string(rows[i]) + " out of range for " +
                            std::to_string(x.size()) + " rows");
    }
    if (i > 0 && rows[i] == rows[i - 1]) {
      throw ValidationError("subset: duplicate index " + std::to_string(rows[i]));
    }
  }
  std::vector<int> counts(static_cast<std::size_t>(x.size()), 0);
  for (int r : rows) counts[static_cast<std::size_t>(r)] = 1;
  return replicate(x, counts);
}

EmbeddedDataset replicate(const EmbeddedDataset& x, std::span<const int> counts) {
  if (counts.size() != static_cast<std::size_t>(x.size())) {
    throw ValidationError("replicate: " + std::to_string(counts.size()) + " counts for " +
                          std::to_string(x.size()) + " rows");
  }
  long total = 0;
  for (int c : counts) {
    if (c < 0) throw ValidationError("replicate: negative count");
    total += c;
  }
  Matrix features(total, x.dim());
  std::vector<std::uint8_t> labels;
  labels.reserve(static_cast<std::size_t>(total));
  std::optional<std::vector<CategoryTag>> tags;
  if (x.has_tags()) {
    tags.emplace();
    tags->reserve(static_cast<std::size_t>(total));
  }
  Eigen::Index out = 0;
  for (int i = 0; i < x.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (int c = 0; c < counts[ui]; ++c) {
      features.row(out++) = x.features().row(i);
      labels.push_back(x.labels()[ui]);
      if (tags) tags->push_back(x.tags()[ui]);
    }
  }
  return EmbeddedDataset(std::move(features), std::move(labels), std::move(tags));
}

EmbeddedDataset with_bias_column(const EmbeddedDataset& x) {
  Matrix features(x.size(), x.dim() + 1);
  features.leftCols(x.dim()) = x.features();
  features.col(x.dim()).setOnes();
  return EmbeddedDataset(std::move(features), x.labels(), x.maybe_tags());
}

EmbeddedDataset with_flipped_labels(const EmbeddedDataset& x, std::span<const int> indices) {
  std::vector<std::uint8_t> labels = x.labels();
  for (int i : indices) {
    if (i < 0 || i >= x.size()) {
      throw ValidationError("flip index " + std::to_string(i) + " out of range");
    }
    auto& label = labels[static_cast<std::size_t>(i)];
    label = static_cast<std::uint8_t>(1 - label);
  }
  return EmbeddedDataset(x.features(), std::move(labels), x.maybe_tags());
}

}  // namespace pmic
