#include "pmic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "pmic/parallel.hpp"
#include "pmic/rng.hpp"

namespace pmic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EmbeddedDataset model_view(const EmbeddedDataset& x, const HarnessOptions& options) {
  return options.append_bias ? with_bias_column(x) : x;
}

// PMI of (d, t) given the posterior of d and t; both datasets already carry
// any bias column.
PmiValue pmi_from_posteriors(const EmbeddedDataset& d, const EmbeddedDataset& t,
                             const GaussianDist& post_d, const GaussianDist& post_t,
                             const PriorSpec& prior, const HarnessOptions& options,
                             std::size_t pair_index) {
  const GaussianDist prior_dist = prior.distribution();
  switch (options.path) {
    case PmiPath::kGaussianClosedForm:
      return pmi_gaussian(post_d, post_t, prior_dist);
    case PmiPath::kEtaPoint: {
      const GaussianDist joint = laplace_fit(concat(d, t), prior, options.fit);
      return pmi_at_eta(post_d, post_t, joint, prior_dist, Vector::Zero(prior.dim));
    }
    case PmiPath::kMonteCarlo: {
      if (t.empty()) return PmiValue{0.0, Vector::Zero(prior.dim), PmiPath::kMonteCarlo};
      Rng rng = substream(options.seed, "mc/pair", pair_index);
      const auto loglik = [&t](const Vector& w) { return logistic_log_likelihood(t, w); };
      return monte_carlo_pmi(post_d, prior_dist, loglik, options.mc_samples, rng).pmi;
    }
  }
  throw ValidationError("unhandled PMI path");
}

Rng curation_rng(const HarnessOptions& options, const CurationMethod& method, std::size_t index) {
  return substream(options.seed, "curate/" + std::string(to_string(method.kind)) + "/pair", index);
}

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

double sample_std(std::span<const double> values) {
  const double mean = mean_of(values);
  double ss = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    ss += (v - mean) * (v - mean);
    ++n;
  }
  return n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

std::string format_level(double bits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", bits);
  return buf;
}

}  // namespace

PmiValue score_pair(const EmbeddedDataset& d, const EmbeddedDataset& t, double c,
                    const HarnessOptions& options, std::size_t pair_index) {
  if (d.dim() != t.dim()) throw ValidationError("score_pair: dimension mismatch");
  const EmbeddedDataset dm = model_view(d, options);
  const EmbeddedDataset tm = model_view(t, options);
  const PriorSpec prior(c, dm.dim());
  const GaussianDist post_d = laplace_fit(dm, prior, options.fit);
  const GaussianDist post_t = laplace_fit(tm, prior, options.fit);
  return pmi_from_posteriors(dm, tm, post_d, post_t, prior, options, pair_index);
}

MiEstimate summarize(std::vector<double> per_pair, PmiPath path) {
  MiEstimate est;
  est.path = path;
  for (std::size_t i = 0; i < per_pair.size(); ++i) {
    if (std::isnan(per_pair[i])) est.failed_pairs.push_back(i);
  }
  est.k = static_cast<int>(per_pair.size() - est.failed_pairs.size());
  est.mean_nats = est.k ? mean_of(per_pair) : kNaN;
  est.mean_bits = est.mean_nats / std::numbers::ln2;
  est.std_nats = sample_std(per_pair);
  est.per_pair = std::move(per_pair);
  return est;
}

MiEstimate run_alg1(const PairSource& source, std::size_t k, const CurationMethod& method,
                    double c, const HarnessOptions& options) {
  if (k < 1) throw ValidationError("run_alg1 needs at least one pair");
  std::vector<double> values(k, kNaN);
  parallel_for(k, options.workers, [&](std::size_t i) {
    const CurationPair item = source(i);
    Rng rng = curation_rng(options, method, i);
    try {
      const EmbeddedDataset curated =
          apply_curation(method, item.pair.d, item.pair.t, &item.flips, rng);
      values[i] = score_pair(curated, item.pair.t, c, options, i).value;
    } catch (const NumericalError& e) {
      if (!options.skip_failures) throw PairFailure(i, e.what());
    }
  });
  return summarize(std::move(values), options.path);
}

MiEstimate run_alg1(std::span<const CurationPair> pairs, const CurationMethod& method, double c,
                    const HarnessOptions& options) {
  return run_alg1([&](std::size_t i) { return pairs[i]; }, pairs.size(), method, c, options);
}

MiEstimate run_alg1(std::span<const DatasetPair> pairs, const CurationMethod& method, double c,
                    const HarnessOptions& options) {
  return run_alg1([&](std::size_t i) { return CurationPair{pairs[i], {}}; }, pairs.size(), method,
                  c, options);
}

double classification_accuracy(const Vector& weights, const EmbeddedDataset& t) {
  if (t.empty()) throw ValidationError("accuracy of an empty test set is undefined");
  if (weights.size() != t.dim()) throw ValidationError("accuracy: weight dimension mismatch");
  const Vector scores = t.features() * weights;
  int correct = 0;
  for (int i = 0; i < t.size(); ++i) {
    const std::uint8_t predicted = scores(i) >= 0.0 ? 1 : 0;
    correct += predicted == t.labels()[static_cast<std::size_t>(i)];
  }
  return static_cast<double>(correct) / t.size();
}

Dispersion score_test_accuracy(const PairSource& source, std::size_t k,
                               const CurationMethod& method, double c,
                               const HarnessOptions& options) {
  if (k < 1) throw ValidationError("score_test_accuracy needs at least one pair");
  std::vector<double> acc(k, kNaN);
  parallel_for(k, options.workers, [&](std::size_t i) {
    const CurationPair item = source(i);
    Rng rng = curation_rng(options, method, i);
    try {
      const EmbeddedDataset curated =
          model_view(apply_curation(method, item.pair.d, item.pair.t, &item.flips, rng), options);
      const GaussianDist post = laplace_fit(curated, PriorSpec(c, curated.dim()), options.fit);
      acc[i] = classification_accuracy(post.mean(), model_view(item.pair.t, options));
    } catch (const NumericalError& e) {
      if (!options.skip_failures) throw PairFailure(i, e.what());
    }
  });
  return Dispersion{mean_of(acc), sample_std(acc)};
}

std::vector<CurationOutcome> curation_experiment(const PairSource& source, std::size_t k_inner,
                                                 std::size_t n_outer,
                                                 std::span<const CurationMethod> methods, double c,
                                                 const HarnessOptions& options) {
  if (k_inner < 1 || n_outer < 1) throw ValidationError("curation_experiment needs k_inner, n_outer >= 1");
  const std::size_t total = k_inner * n_outer;
  const std::size_t m = methods.size();
  std::vector<double> base_pmi(total, kNaN);
  std::vector<double> base_acc(total, kNaN);
  std::vector<std::vector<double>> pmi(m, std::vector<double>(total, kNaN));
  std::vector<std::vector<double>> acc(m, std::vector<double>(total, kNaN));

  parallel_for(total, options.workers, [&](std::size_t i) {
    const CurationPair item = source(i);
    const EmbeddedDataset t = model_view(item.pair.t, options);
    try {
      const PriorSpec prior(c, t.dim());
      const GaussianDist post_t = laplace_fit(t, prior, options.fit);
      const auto evaluate = [&](const EmbeddedDataset& raw_d) {
        const EmbeddedDataset d = model_view(raw_d, options);
        const GaussianDist post_d = laplace_fit(d, prior, options.fit);
        return std::pair{pmi_from_posteriors(d, t, post_d, post_t, prior, options, i).value,
                         classification_accuracy(post_d.mean(), t)};
      };
      const auto [p0, a0] = evaluate(item.pair.d);
      std::vector<double> pm(m);
      std::vector<double> am(m);
      for (std::size_t j = 0; j < m; ++j) {
        if (methods[j].kind == CurationKind::kIdentity) {
          pm[j] = p0;
          am[j] = a0;
          continue;
        }
        Rng rng = curation_rng(options, methods[j], i);
        const auto [pj, aj] =
            evaluate(apply_curation(methods[j], item.pair.d, item.pair.t, &item.flips, rng));
        pm[j] = pj;
        am[j] = aj;
      }
      base_pmi[i] = p0;
      base_acc[i] = a0;
      for (std::size_t j = 0; j < m; ++j) {
        pmi[j][i] = pm[j];
        acc[j][i] = am[j];
      }
    } catch (const NumericalError& e) {
      if (!options.skip_failures) throw PairFailure(i, e.what());
    }
  });

  std::vector<CurationOutcome> outcomes;
  outcomes.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    CurationOutcome out;
    out.method = methods[j];
    out.c = c;
    out.n_outer = static_cast<int>(n_outer);
    std::vector<double> dp(total);
    std::vector<double> da(total);
    for (std::size_t i = 0; i < total; ++i) {
      dp[i] = pmi[j][i] - base_pmi[i];
      da[i] = 100.0 * (acc[j][i] - base_acc[i]);
      if (!std::isnan(dp[i])) ++out.k;
    }
    for (std::size_t g = 0; g < n_outer; ++g) {
      const auto first = static_cast<std::ptrdiff_t>(g * k_inner);
      const auto last = first + static_cast<std::ptrdiff_t>(k_inner);
      out.group_delta_pmi.push_back(mean_of(std::span(dp.begin() + first, dp.begin() + last)));
      out.group_delta_accuracy_pct.push_back(
          mean_of(std::span(da.begin() + first, da.begin() + last)));
    }
    out.delta_pmi = Dispersion{mean_of(dp), n_outer > 1 ? sample_std(out.group_delta_pmi) : 0.0};
    out.delta_accuracy_pct =
        Dispersion{mean_of(da), n_outer > 1 ? sample_std(out.group_delta_accuracy_pct) : 0.0};
    out.per_pair_pmi = pmi[j];
    out.per_pair_accuracy = acc[j];
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(m);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ValidationError("spearman: length mismatch (" + std::to_string(xs.size()) + " vs " +
                          std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw ValidationError("spearman needs at least two points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::isnan(xs[i]) || std::isnan(ys[i])) throw ValidationError("spearman: NaN input");
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  double d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const auto m = static_cast<double>(xs.size());
  return 1.0 - 6.0 * d2 / (m * (m * m - 1.0));
}

std::uint64_t level_seed(std::uint64_t master, double target_bits) {
  return derive_seed(master, "benchmark/level/" + format_level(target_bits));
}

RankReport benchmark_experiment(std::span<const double> levels, const BenchmarkTemplate& tmpl,
                                const CorpusPool& pool, double c, const HarnessOptions& options) {
  if (levels.size() < 2) throw ValidationError("benchmark_experiment needs at least two levels");
  std::vector<double> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("benchmark levels must be distinct");
  }
  RankReport report;
  std::vector<double> estimates;
  for (double bits : sorted) {
    const std::uint64_t seed = level_seed(tmpl.seed, bits);
    BenchmarkSpec spec = make_benchmark_spec(bits, tmpl.k, tmpl.size_min, tmpl.size_max, seed);
    HarnessOptions level_options = options;
    level_options.seed = seed;
    const auto source = [&](std::size_t i) { return CurationPair{generate_pair(spec, pool, i), {}}; };
    MiEstimate est = run_alg1(source, static_cast<std::size_t>(spec.k), CurationMethod{}, c,
                              level_options);
    estimates.push_back(est.mean_nats);
    report.levels.push_back(LevelResult{bits, std::move(spec), std::move(est)});
  }
  report.spearman_rho = spearman(sorted, estimates);
  return report;
}

std::vector<ConvergencePoint> convergence_study(
    const std::function<double(std::size_t)>& pmi_nats, double truth_bits,
    std::span<const std::size_t> k_grid, int replications, int workers) {
  if (replications < 2) throw ValidationError("convergence_study needs >= 2 replications");
  if (k_grid.empty()) throw ValidationError("convergence_study needs a non-empty k grid");
  for (std::size_t j = 0; j < k_grid.size(); ++j) {
    if (k_grid[j] < 1 || (j > 0 && k_grid[j] <= k_grid[j - 1])) {
      throw ValidationError("k grid must be strictly ascending and positive");
    }
  }
  const auto reps = static_cast<std::size_t>(replications);
  std::size_t total = 0;
  for (std::size_t k : k_grid) total += k * reps;
  std::vector<double> values(total);
  parallel_for(total, workers, [&](std::size_t i) { values[i] = pmi_nats(i); });

  std::vector<ConvergencePoint> points;
  std::size_t offset = 0;
  for (std::size_t k : k_grid) {
    std::vector<double> sq(reps);
    for (std::size_t r = 0; r < reps; ++r, offset += k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += values[offset + i];
      const double err = sum / static_cast<double>(k) / std::numbers::ln2 - truth_bits;
      sq[r] = err * err;
    }
    const double mse = mean_of(sq);
    const double half = 1.96 * sample_std(sq) / std::sqrt(static_cast<double>(reps));
    points.push_back(ConvergencePoint{k, mse, std::max(0.0, mse - half), mse + half});
  }
  return points;
}

}  // namespace pmic
