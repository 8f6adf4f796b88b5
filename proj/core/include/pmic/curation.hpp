#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pmic/dataset.hpp"
#include "pmic/rng.hpp"

namespace pmic {

enum class CurationKind {
  kIdentity,
  kDenoise,           ///< drop rows whose labels were flipped
  kDuplicateToMatch,  ///< duplicate rows until category ratios match the test set
  kRemoveToMatch,     ///< drop rows until category ratios match the test set
};

std::string_view to_string(CurationKind kind) noexcept;
/// "identity", "denoise", "duplicate-to-match" (or "duplicate"),
/// "remove-to-match" (or "remove").
CurationKind parse_curation_kind(std::string_view name);

struct CurationMethod {
  CurationKind kind = CurationKind::kIdentity;
  /// Denoise only: restore the original labels instead of dropping the rows.
  bool restore_labels = false;

  bool needs_tags() const noexcept {
    return kind == CurationKind::kDuplicateToMatch || kind == CurationKind::kRemoveToMatch;
  }
};

/// Indices (ascending, unique) of rows whose labels were inverted.
struct FlipRecord {
  std::vector<int> flipped_indices;
};

/// Inverts round(fraction * n) labels chosen uniformly without replacement.
std::pair<EmbeddedDataset, FlipRecord> flip_labels(const EmbeddedDataset& x, double fraction,
                                                   Rng& rng);

/// Removes the rows listed in `record`.
EmbeddedDataset denoise(const EmbeddedDataset& x, const FlipRecord& record);
/// Inverts the labels listed in `record` back.
EmbeddedDataset restore_labels(const EmbeddedDataset& x, const FlipRecord& record);

/// Largest-remainder apportionment of `total` seats over `weights`; ties go
/// to the lower category index.
std::array<int, kNumCategories> apportion(int total, const std::array<int, kNumCategories>& weights);

/// Target per-category counts for the two matching strategies. Both look at
/// `d`'s tags and `t`'s tags only.
std::array<int, kNumCategories> duplicate_targets(const EmbeddedDataset& d,
                                                  const EmbeddedDataset& t);
std::array<int, kNumCategories> removal_targets(const EmbeddedDataset& d, const EmbeddedDataset& t);

/// Duplicates rows of `d` so its category proportions match `t`'s. Every row
/// is kept at least once; extra copies within a category are spread evenly,
/// with the remainder placed on rows picked uniformly without replacement.
EmbeddedDataset match_ratio_duplicate(const EmbeddedDataset& d, const EmbeddedDataset& t,
                                      Rng& rng);

/// Largest subset of `d` whose category proportions match `t`'s; kept rows
/// are picked uniformly without replacement within each category.
EmbeddedDataset match_ratio_remove(const EmbeddedDataset& d, const EmbeddedDataset& t, Rng& rng);

/// Applies `method` to `d`. `flips` is required by kDenoise only.
EmbeddedDataset apply_curation(const CurationMethod& method, const EmbeddedDataset& d,
                               const EmbeddedDataset& t, const FlipRecord* flips, Rng& rng);

/// Tagged corpus with four categories. A point of class y and non-essential
/// feature z is  ±(essential_sep / 2) u  ±(nonessential_sep / 2) v + N(0, I)
/// for random orthonormal u, v; rows are grouped by category.
EmbeddedDataset synth_tagged_corpus(int dim, int per_category, double essential_separation,
                                    double nonessential_separation, Rng& rng);

/// Per-category sizes for sampled train/test sets and the label-noise level.
struct CurationPairSpec {
  std::array<int, kNumCategories> train_counts{30, 30, 30, 30};
  std::array<int, kNumCategories> test_counts{30, 60, 60, 30};
  double flip_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CurationPair {
  DatasetPair pair;
  FlipRecord flips;
};

/// Draws disjoint train and test sets from `pool` (without replacement, per
/// category) and flips `flip_fraction` of the train labels. Deterministic in
/// (spec.seed, index).
CurationPair generate_curation_pair(const CurationPairSpec& spec, const EmbeddedDataset& pool,
                                    std::size_t index);

}  // namespace pmic
