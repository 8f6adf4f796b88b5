#include "pmic/curation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pmic/error.hpp"

namespace pmic {
namespace {

std::array<std::vector<int>, kNumCategories> rows_by_category(const EmbeddedDataset& x) {
  std::array<std::vector<int>, kNumCategories> rows;
  const auto& tags = x.tags();
  for (int i = 0; i < x.size(); ++i) {
    rows[static_cast<std::size_t>(tags[static_cast<std::size_t>(i)].category())].push_back(i);
  }
  return rows;
}

// First `count` entries of a uniform random permutation of `items`.
std::vector<int> partial_shuffle(std::vector<int> items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(count);
  return items;
}

std::string category_name(int c) {
  const CategoryTag tag = CategoryTag::from_category(c);
  return "category " + std::to_string(c) + " (class " + std::to_string(tag.essential_class) +
         ", non-essential " + std::to_string(tag.nonessential_feature) + ")";
}

void require_tags(const EmbeddedDataset& d, const EmbeddedDataset& t) {
  if (!d.has_tags() || !t.has_tags()) {
    throw ValidationError("ratio matching requires category tags on both datasets");
  }
}

}  // namespace

std::string_view to_string(CurationKind kind) noexcept {
  switch (kind) {
    case CurationKind::kIdentity:
      return "identity";
    case CurationKind::kDenoise:
      return "denoise";
    case CurationKind::kDuplicateToMatch:
      return "duplicate-to-match";
    case CurationKind::kRemoveToMatch:
      return "remove-to-match";
  }
  return "unknown";
}

CurationKind parse_curation_kind(std::string_view name) {
  if (name == "identity") return CurationKind::kIdentity;
  if (name == "denoise") return CurationKind::kDenoise;
  if (name == "duplicate-to-match" || name == "duplicate") return CurationKind::kDuplicateToMatch;
  if (name == "remove-to-match" || name == "remove") return CurationKind::kRemoveToMatch;
  throw ValidationError("unknown curation method '" + std::string(name) +
                        "' (expected identity, denoise, duplicate-to-match or remove-to-match)");
}

std::pair<EmbeddedDataset, FlipRecord> flip_labels(const EmbeddedDataset& x, double fraction,
                                                   Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ValidationError("flip fraction must lie in [0, 1]");
  }
  const auto count = static_cast<std::size_t>(std::llround(fraction * x.size()));
  std::vector<int> all(static_cast<std::size_t>(x.size()));
  std::iota(all.begin(), all.end(), 0);
  FlipRecord record{partial_shuffle(std::move(all), count, rng)};
  std::sort(record.flipped_indices.begin(), record.flipped_indices.end());
  return {with_flipped_labels(x, record.flipped_indices), std::move(record)};
}

EmbeddedDataset denoise(const EmbeddedDataset& x, const FlipRecord& record) {
  std::vector<char> drop(static_cast<std::size_t>(x.size()), 0);
  for (int i : record.flipped_indices) {
    if (i < 0 || i >= x.size()) {
      throw ValidationError("flip record index " + std::to_string(i) + " out of range for " +
                            std::to_string(x.size()) + " rows");
    }
    if (drop[static_cast<std::size_t>(i)]) {
      throw ValidationError("flip record repeats index " + std::to_string(i));
    }
    drop[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<int> keep;
  for (int i = 0; i < x.size(); ++i) {
    if (!drop[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  return subset(x, keep);
}

EmbeddedDataset restore_labels(const EmbeddedDataset& x, const FlipRecord& record) {
  return with_flipped_labels(x, record.flipped_indices);
}

std::array<int, kNumCategories> apportion(int total,
                                          const std::array<int, kNumCategories>& weights) {
  long sum = 0;
  for (int w : weights) {
    if (w < 0) throw ValidationError("apportion: negative weight");
    sum += w;
  }
  if (sum == 0) throw ValidationError("apportion: all weights are zero");
  std::array<int, kNumCategories> seats{};
  std::array<long, kNumCategories> remainder{};
  long assigned = 0;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const long quota = static_cast<long>(total) * weights[c];
    seats[c] = static_cast<int>(quota / sum);
    remainder[c] = quota % sum;
    assigned += seats[c];
  }
  std::array<std::size_t, kNumCategories> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++seats[order[i]];
  return seats;
}

std::array<int, kNumCategories> duplicate_targets(const EmbeddedDataset& d,
                                                  const EmbeddedDataset& t) {
  require_tags(d, t);
  const auto have = d.category_counts();
  const auto want = t.category_counts();
  const long total_want = std::accumulate(want.begin(), want.end(), 0L);
  if (total_want == 0) throw ValidationError("test set is empty; no ratios to match");
  long needed = 0;
  for (int c = 0; c < kNumCategories; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    if (want[uc] > 0 && have[uc] == 0) {
      throw ValidationError(category_name(c) + " of the test set is absent from the train set");
    }
    if (want[uc] == 0 && have[uc] > 0) {
      throw ValidationError(category_name(c) +
                            " is absent from the test set; duplication cannot remove it");
    }
    if (want[uc] > 0) {
      const long n = (static_cast<long>(have[uc]) * total_want + want[uc] - 1) / want[uc];
      needed = std::max(needed, n);
    }
  }
  return apportion(static_cast<int>(needed), want);
}

std::array<int, kNumCategories> removal_targets(const EmbeddedDataset& d,
                                                const EmbeddedDataset& t) {
  require_tags(d, t);
  const auto have = d.category_counts();
  const auto want = t.category_counts();
  const long total_want = std::accumulate(want.begin(), want.end(), 0L);
  if (total_want == 0) throw ValidationError("test set is empty; no ratios to match");
  long total = -1;
  for (int c = 0; c < kNumCategories; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    if (want[uc] == 0) continue;
    if (have[uc] == 0) {
      throw ValidationError(category_name(c) + " of the test set is absent from the train set");
    }
    const long n = static_cast<long>(have[uc]) * total_want / want[uc];
    total = total < 0 ? n : std::min(total, n);
  }
  for (; total >= 0; --total) {
    const auto seats = apportion(static_cast<int>(total), want);
    bool feasible = true;
    for (std::size_t c = 0; c < kNumCategories; ++c) feasible = feasible && seats[c] <= have[c];
    if (feasible) return seats;
  }
  return {};
}

EmbeddedDataset match_ratio_duplicate(const EmbeddedDataset& d, const EmbeddedDataset& t,
                                      Rng& rng) {
  const auto targets = duplicate_targets(d, t);
  const auto rows = rows_by_category(d);
  std::vector<int> counts(static_cast<std::size_t>(d.size()), 1);
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto& members = rows[c];
    if (members.empty()) continue;
    const std::size_t extra = static_cast<std::size_t>(targets[c]) - members.size();
    const auto base = static_cast<int>(extra / members.size());
    for (int r : members) counts[static_cast<std::size_t>(r)] += base;
    for (int r : partial_shuffle(members, extra % members.size(), rng)) {
      ++counts[static_cast<std::size_t>(r)];
    }
  }
  return replicate(d, counts);
}

EmbeddedDataset match_ratio_remove(const EmbeddedDataset& d, const EmbeddedDataset& t, Rng& rng) {
  const auto targets = removal_targets(d, t);
  const auto rows = rows_by_category(d);
  std::vector<int> keep;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto chosen = partial_shuffle(rows[c], static_cast<std::size_t>(targets[c]), rng);
    keep.insert(keep.end(), chosen.begin(), chosen.end());
  }
  return subset(d, keep);
}

EmbeddedDataset apply_curation(const CurationMethod& method, const EmbeddedDataset& d,
                               const EmbeddedDataset& t, const FlipRecord* flips, Rng& rng) {
  switch (method.kind) {
    case CurationKind::kIdentity:
      return d;
    case CurationKind::kDenoise:
      if (flips == nullptr) throw ValidationError("denoise requires a flip record");
      return method.restore_labels ? restore_labels(d, *flips) : denoise(d, *flips);
    case CurationKind::kDuplicateToMatch:
      return match_ratio_duplicate(d, t, rng);
    case CurationKind::kRemoveToMatch:
      return match_ratio_remove(d, t, rng);
  }
  throw ValidationError("unhandled curation method");
}

EmbeddedDataset synth_tagged_corpus(int dim, int per_category, double essential_separation,
                                    double nonessential_separation, Rng& rng) {
  if (dim < 2) throw ValidationError("synth_tagged_corpus: dim must be >= 2");
  if (per_category < 1) throw ValidationError("synth_tagged_corpus: per_category must be >= 1");
  if (!(essential_separation >= 0.0) || !(nonessential_separation >= 0.0)) {
    throw ValidationError("synth_tagged_corpus: separations must be >= 0");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(dim);
  Vector v(dim);
  for (int j = 0; j < dim; ++j) u(j) = normal(rng);
  for (int j = 0; j < dim; ++j) v(j) = normal(rng);
  u.normalize();
  v -= v.dot(u) * u;
  v.normalize();

  const int n = kNumCategories * per_category;
  Matrix features(n, dim);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
  std::vector<CategoryTag> tags(static_cast<std::size_t>(n));
  int row = 0;
  for (int c = 0; c < kNumCategories; ++c) {
    const CategoryTag tag = CategoryTag::from_category(c);
    const Vector centre = (tag.essential_class ? 0.5 : -0.5) * essential_separation * u +
                          (tag.nonessential_feature ? 0.5 : -0.5) * nonessential_separation * v;
    for (int i = 0; i < per_category; ++i, ++row) {
      for (int j = 0; j < dim; ++j) features(row, j) = centre(j) + normal(rng);
      labels[static_cast<std::size_t>(row)] = tag.essential_class;
      tags[static_cast<std::size_t>(row)] = tag;
    }
  }
  return EmbeddedDataset(std::move(features), std::move(labels), std::move(tags));
}

void CurationPairSpec::validate() const {
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    if (train_counts[c] < 0 || test_counts[c] < 0) {
      throw ValidationError("curation pair category counts must be >= 0");
    }
  }
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw ValidationError("flip fraction must lie in [0, 1]");
  }
}

CurationPair generate_curation_pair(const CurationPairSpec& spec, const EmbeddedDataset& pool,
                                    std::size_t index) {
  spec.validate();
  const auto rows = rows_by_category(pool);
  Rng rng = substream(spec.seed, "curation/pair", index);
  std::vector<int> train_rows;
  std::vector<int> test_rows;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const auto need = static_cast<std::size_t>(spec.train_counts[c] + spec.test_counts[c]);
    if (need > rows[c].size()) {
      throw ValidationError(category_name(static_cast<int>(c)) + " of the pool has " +
                            std::to_string(rows[c].size()) + " rows, " + std::to_string(need) +
                            " needed");
    }
    const auto picked = partial_shuffle(rows[c], need, rng);
    const auto split = picked.begin() + spec.train_counts[c];
    train_rows.insert(train_rows.end(), picked.begin(), split);
    test_rows.insert(test_rows.end(), split, picked.end());
  }
  auto [train, flips] = flip_labels(subset(pool, train_rows), spec.flip_fraction, rng);
  return CurationPair{DatasetPair(std::move(train), subset(pool, test_rows)), std::move(flips)};
}

}  // namespace pmic
