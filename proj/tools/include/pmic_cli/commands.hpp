#pragma once

#include <filesystem>
#include <vector>

#include "pmic/dataset.hpp"
#include "pmic/harness.hpp"
#include "pmic/mi_benchmark.hpp"
#include "pmic_cli/config.hpp"

namespace pmic::cli {

struct CommandResult {
  std::vector<std::filesystem::path> files;  ///< everything written, in write order
};

HarnessOptions harness_options(const RunConfig& config);

/// Two-class pool for the benchmark: synthetic (substream "corpus") or EMB1.
CorpusPool benchmark_pool(const RunConfig& config);
/// Tagged four-category pool for curation: synthetic (substream "corpus") or EMB1.
EmbeddedDataset tagged_pool(const RunConfig& config);

/// rank_report.json, benchmark_manifest.json, pmi_values.csv and optionally
/// convergence.csv and pairs/level_<bits>/pair_<i>_{d,t}.emb.
CommandResult cmd_benchmark(const RunConfig& config);
/// curation_outcomes.json and pmi_values.csv.
CommandResult cmd_curate(const RunConfig& config);
/// estimate.json and pmi_values.csv.
CommandResult cmd_estimate(const RunConfig& config);

/// Validates and dispatches on config.command.
CommandResult run(const RunConfig& config);

}  // namespace pmic::cli
