#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmic/bayes.hpp"
#include "pmic/curation.hpp"
#include "pmic/pmi.hpp"

namespace pmic::cli {

enum class Command { kBenchmark, kCurate, kEstimate };

std::string_view to_string(Command command) noexcept;

/// Where points come from: generated in-process, or an EMB1 file.
struct CorpusConfig {
  std::string source = "synthetic";  ///< "synthetic" | "emb1"
  std::filesystem::path path;
  int dim = 0;  ///< 0: 20 for benchmark, 100 for curate
  // benchmark corpus
  int per_class = 2000;
  double separation = 6.0;
  // tagged curation corpus
  int per_category = 2000;
  double essential_separation = 2.0;
  double nonessential_separation = 5.0;
};

struct ConvergenceConfig {
  double target_bits = 0.5;
  std::vector<std::size_t> k_grid{100, 400};
  int replications = 30;
  std::string model = "logistic";  ///< "logistic" | "conjugate"
  std::optional<double> c;          ///< logistic only; defaults to the first c value
  double noise_var = 1.0;           ///< conjugate only
  int n_d = 20;
  int n_t = 20;
};

struct BenchmarkConfig {
  std::vector<double> levels{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int k = 500;
  int size_min = 50;
  int size_max = 100;
  bool materialize_pairs = false;
  std::optional<ConvergenceConfig> convergence;
};

struct CurationConfig {
  std::vector<std::string> methods{"identity", "denoise", "duplicate-to-match", "remove-to-match"};
  bool restore_labels = false;
  int k_inner = 500;
  int n_outer = 10;
  std::array<int, 4> train_counts{30, 30, 30, 30};
  std::array<int, 4> test_counts{30, 60, 60, 30};
  double flip_fraction = 0.1;

  std::vector<CurationMethod> parsed_methods() const;
};

struct PairFiles {
  std::filesystem::path d;
  std::filesystem::path t;
};

struct EstimateConfig {
  std::vector<PairFiles> pairs;
  bool compare_paths = false;
};

struct RunConfig {
  Command command = Command::kBenchmark;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  std::vector<double> c_values{1.0};
  PmiPath path = PmiPath::kGaussianClosedForm;
  bool append_bias = false;
  int mc_samples = 2000;
  int workers = 1;
  bool skip_failures = false;
  FitSettings fit{};
  CorpusConfig corpus;
  BenchmarkConfig benchmark;
  CurationConfig curation;
  EstimateConfig estimate;

  /// Range checks plus existence of every referenced input file.
  void validate() const;
};

/// Flag values that override the config document.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::vector<double>> c_values;
  std::optional<std::string> path;
  std::optional<int> workers;
};

/// Parses a config document for `command`. Unknown keys are rejected.
RunConfig parse_config(Command command, const nlohmann::json& doc);
RunConfig load_config(Command command, const std::filesystem::path& file);
void apply_overrides(RunConfig& config, const Overrides& overrides);

/// The fully resolved config, as echoed into every report.
nlohmann::json to_json(const RunConfig& config);

}  // namespace pmic::cli
