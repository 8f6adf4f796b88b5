#include "pmic_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "pmic/conjugate_benchmark.hpp"
#include "pmic/emb_io.hpp"
#include "pmic/error.hpp"
#include "pmic/rng.hpp"
#include "pmic_cli/report.hpp"

namespace pmic::cli {
namespace {

using nlohmann::json;

json estimate_json(const MiEstimate& e) {
  return {{"path", std::string(to_string(e.path))},
          {"mean_nats", e.mean_nats},
          {"mean_bits", e.mean_bits},
          {"std_nats", e.std_nats},
          {"k", e.k},
          {"failed_pairs", e.failed_pairs}};
}

json dispersion_json(const Dispersion& d) { return {{"mean", d.mean}, {"std", d.std}}; }

std::string level_dir(double bits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "level_%.6f", bits);
  return buf;
}

std::vector<ConvergencePoint> run_convergence(const RunConfig& config, const CorpusPool& pool,
                                              const ConvergenceConfig& conv) {
  const std::uint64_t seed = derive_seed(config.seed, "convergence");
  if (conv.model == "conjugate") {
    const auto model =
        ConjugateBenchmark::for_target_bits(conv.target_bits, conv.noise_var, conv.n_d, conv.n_t, seed);
    return convergence_study([&](std::size_t i) { return model.pmi(model.generate(i)); },
                             conv.target_bits, conv.k_grid, conv.replications, config.workers);
  }
  const double c = conv.c.value_or(config.c_values.front());
  const auto& b = config.benchmark;
  const BenchmarkSpec spec = make_benchmark_spec(conv.target_bits, 1, b.size_min, b.size_max, seed);
  HarnessOptions options = harness_options(config);
  options.seed = seed;
  options.workers = 1;
  const double truth = table_mi(spec.table.rho);
  return convergence_study(
      [&](std::size_t i) {
        const DatasetPair pair = generate_pair(spec, pool, i);
        return score_pair(pair.d, pair.t, c, options, i).value;
      },
      truth, conv.k_grid, conv.replications, config.workers);
}

}  // namespace

HarnessOptions harness_options(const RunConfig& config) {
  HarnessOptions o;
  o.path = config.path;
  o.fit = config.fit;
  o.append_bias = config.append_bias;
  o.mc_samples = config.mc_samples;
  o.seed = config.seed;
  o.workers = config.workers;
  o.skip_failures = config.skip_failures;
  return o;
}

CorpusPool benchmark_pool(const RunConfig& config) {
  const auto& c = config.corpus;
  if (c.source == "emb1") return CorpusPool::from_dataset(read_emb1(c.path));
  Rng rng = substream(config.seed, "corpus");
  return synth_corpus(c.dim, c.per_class, c.separation, rng);
}

EmbeddedDataset tagged_pool(const RunConfig& config) {
  const auto& c = config.corpus;
  if (c.source == "emb1") {
    EmbeddedDataset x = read_emb1(c.path);
    if (!x.has_tags()) {
      throw ValidationError("curation corpus " + c.path.string() +
                            " carries no category tags; curate needs a tagged EMB1 file");
    }
    return x;
  }
  Rng rng = substream(config.seed, "corpus");
  return synth_tagged_corpus(c.dim, c.per_category, c.essential_separation,
                             c.nonessential_separation, rng);
}

CommandResult cmd_benchmark(const RunConfig& config) {
  CommandResult result;
  const auto& b = config.benchmark;
  const CorpusPool pool = benchmark_pool(config);
  const HarnessOptions options = harness_options(config);
  const BenchmarkTemplate tmpl{b.k, b.size_min, b.size_max, config.seed};

  json reports = json::array();
  json manifest_levels = json::array();
  const auto csv_path = output_file(config, "pmi_values.csv");
  CsvWriter csv(csv_path, {"c", "target_bits", "pair", "pmi_nats", "pmi_bits"});
  for (std::size_t ci = 0; ci < config.c_values.size(); ++ci) {
    const double c = config.c_values[ci];
    const RankReport report = benchmark_experiment(b.levels, tmpl, pool, c, options);
    json levels = json::array();
    for (const auto& level : report.levels) {
      json lj = estimate_json(level.estimate);
      lj["target_bits"] = level.target_bits;
      lj["rho"] = level.spec.table.rho;
      lj["truth_bits"] = table_mi(level.spec.table.rho);
      levels.push_back(lj);
      for (std::size_t i = 0; i < level.estimate.per_pair.size(); ++i) {
        const double v = level.estimate.per_pair[i];
        csv.cell(c).cell(level.target_bits).cell(i).cell(v).cell(v / std::numbers::ln2);
        csv.end_row();
      }
      if (ci == 0) {
        const auto& s = level.spec;
        manifest_levels.push_back({{"target_bits", s.target_bits},
                                   {"rho", s.table.rho},
                                   {"a_d", s.table.a_d},
                                   {"b_d", s.table.b_d},
                                   {"a_t", s.table.a_t},
                                   {"b_t", s.table.b_t},
                                   {"k", s.k},
                                   {"size_min", s.size_min},
                                   {"size_max", s.size_max},
                                   {"seed", s.seed}});
        if (b.materialize_pairs) {
          for (int i = 0; i < s.k; ++i) {
            const DatasetPair pair = generate_pair(s, pool, static_cast<std::size_t>(i));
            const std::filesystem::path dir = std::filesystem::path("pairs") / level_dir(s.target_bits);
            const std::string stem = "pair_" + std::to_string(i);
            write_emb1(output_file(config, dir / (stem + "_d.emb")), pair.d);
            write_emb1(output_file(config, dir / (stem + "_t.emb")), pair.t);
          }
        }
      }
    }
    reports.push_back({{"c", c}, {"spearman_rho", report.spearman_rho}, {"levels", levels}});
  }
  result.files.push_back(csv_path);

  json manifest = report_header(config);
  manifest["size_distribution"] = "uniform";
  manifest["pool_sampling"] = "with-replacement";
  manifest["levels"] = manifest_levels;
  const auto manifest_path = output_file(config, "benchmark_manifest.json");
  write_json(manifest_path, manifest);
  result.files.push_back(manifest_path);

  json rank = report_header(config);
  rank["reports"] = reports;

  if (b.convergence) {
    const auto points = run_convergence(config, pool, *b.convergence);
    const auto conv_path = output_file(config, "convergence.csv");
    CsvWriter conv(conv_path, {"k", "mse", "ci_lo", "ci_hi"});
    json pj = json::array();
    for (const auto& p : points) {
      conv.cell(p.k).cell(p.mse).cell(p.ci_lo).cell(p.ci_hi);
      conv.end_row();
      pj.push_back({{"k", p.k}, {"mse", p.mse}, {"ci_lo", p.ci_lo}, {"ci_hi", p.ci_hi}});
    }
    rank["convergence"] = pj;
    result.files.push_back(conv_path);
  }

  const auto rank_path = output_file(config, "rank_report.json");
  write_json(rank_path, rank);
  result.files.push_back(rank_path);
  return result;
}

CommandResult cmd_curate(const RunConfig& config) {
  CommandResult result;
  const auto& u = config.curation;
  const EmbeddedDataset pool = tagged_pool(config);
  const auto methods = u.parsed_methods();
  const CurationPairSpec spec{u.train_counts, u.test_counts, u.flip_fraction, config.seed};
  const HarnessOptions options = harness_options(config);
  const PairSource source = [&](std::size_t i) { return generate_curation_pair(spec, pool, i); };

  json outcomes = json::array();
  const auto csv_path = output_file(config, "pmi_values.csv");
  CsvWriter csv(csv_path, {"c", "method", "pair", "pmi_nats", "accuracy"});
  for (double c : config.c_values) {
    const auto results = curation_experiment(source, static_cast<std::size_t>(u.k_inner),
                                             static_cast<std::size_t>(u.n_outer), methods, c,
                                             options);
    for (const auto& r : results) {
      outcomes.push_back({{"c", c},
                          {"method", std::string(to_string(r.method.kind))},
                          {"restore_labels", r.method.restore_labels},
                          {"delta_pmi", dispersion_json(r.delta_pmi)},
                          {"delta_accuracy_pct", dispersion_json(r.delta_accuracy_pct)},
                          {"k", r.k},
                          {"n_outer", r.n_outer},
                          {"group_delta_pmi", r.group_delta_pmi},
                          {"group_delta_accuracy_pct", r.group_delta_accuracy_pct}});
      const std::string name(to_string(r.method.kind));
      for (std::size_t i = 0; i < r.per_pair_pmi.size(); ++i) {
        csv.cell(c).cell(name).cell(i).cell(r.per_pair_pmi[i]).cell(r.per_pair_accuracy[i]);
        csv.end_row();
      }
    }
  }
  result.files.push_back(csv_path);

  json doc = report_header(config);
  doc["outcomes"] = outcomes;
  const auto path = output_file(config, "curation_outcomes.json");
  write_json(path, doc);
  result.files.push_back(path);
  return result;
}

CommandResult cmd_estimate(const RunConfig& config) {
  CommandResult result;
  std::vector<DatasetPair> pairs;
  for (const auto& files : config.estimate.pairs) {
    pairs.emplace_back(read_emb1(files.d), read_emb1(files.t));
  }
  const HarnessOptions options = harness_options(config);

  json estimates = json::array();
  const auto csv_path = output_file(config, "pmi_values.csv");
  CsvWriter csv(csv_path, {"c", "path", "pair", "pmi_nats", "pmi_bits"});
  std::vector<PmiPath> paths{config.path};
  if (config.estimate.compare_paths) {
    paths = {PmiPath::kGaussianClosedForm, PmiPath::kEtaPoint, PmiPath::kMonteCarlo};
  }
  for (double c : config.c_values) {
    for (PmiPath path : paths) {
      HarnessOptions o = options;
      o.path = path;
      const MiEstimate e = run_alg1(std::span<const DatasetPair>(pairs), CurationMethod{}, c, o);
      json ej = estimate_json(e);
      ej["c"] = c;
      estimates.push_back(ej);
      const std::string name(to_string(path));
      for (std::size_t i = 0; i < e.per_pair.size(); ++i) {
        csv.cell(c).cell(name).cell(i).cell(e.per_pair[i]).cell(e.per_pair[i] / std::numbers::ln2);
        csv.end_row();
      }
    }
  }
  result.files.push_back(csv_path);

  json doc = report_header(config);
  doc["estimates"] = estimates;
  const auto path = output_file(config, "estimate.json");
  write_json(path, doc);
  result.files.push_back(path);
  return result;
}

CommandResult run(const RunConfig& config) {
  config.validate();
  switch (config.command) {
    case Command::kBenchmark: return cmd_benchmark(config);
    case Command::kCurate: return cmd_curate(config);
    case Command::kEstimate: return cmd_estimate(config);
  }
  throw ValidationError("unknown command");
}

}  // namespace pmic::cli
