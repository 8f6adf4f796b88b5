#include "pmic_cli/config.hpp"

#include <fstream>
#include <set>

#include "pmic/error.hpp"
#include "pmic/parallel.hpp"

namespace pmic::cli {
namespace {

using nlohmann::json;

// Reads fields out of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string where) : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) throw ValidationError(where_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = object_.find(key);
    if (it == object_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ValidationError(where_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) throw ValidationError("unknown config key: " + where_ + "." + key);
    }
  }

 private:
  const json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_file(const std::filesystem::path& path, const std::string& what) {
  require(!path.empty(), what + " path is empty");
  std::error_code ec;
  require(std::filesystem::is_regular_file(path, ec), what + " not found: " + path.string());
}

CorpusConfig parse_corpus(const json& node) {
  CorpusConfig c;
  ObjectReader r(node, "corpus");
  r.get("source", c.source);
  std::string path;
  r.get("path", path);
  c.path = path;
  r.get("dim", c.dim);
  r.get("per_class", c.per_class);
  r.get("separation", c.separation);
  r.get("per_category", c.per_category);
  r.get("essential_separation", c.essential_separation);
  r.get("nonessential_separation", c.nonessential_separation);
  r.finish();
  return c;
}

ConvergenceConfig parse_convergence(const json& node) {
  ConvergenceConfig c;
  ObjectReader r(node, "benchmark.convergence");
  r.get("target_bits", c.target_bits);
  r.get("k_grid", c.k_grid);
  r.get("replications", c.replications);
  r.get("model", c.model);
  if (const json* cv = r.child("c")) {
    require(cv->is_number(), "benchmark.convergence.c has the wrong type");
    c.c = cv->get<double>();
  }
  r.get("noise_var", c.noise_var);
  r.get("n_d", c.n_d);
  r.get("n_t", c.n_t);
  r.finish();
  return c;
}

BenchmarkConfig parse_benchmark(const json& node) {
  BenchmarkConfig b;
  ObjectReader r(node, "benchmark");
  r.get("levels", b.levels);
  r.get("k", b.k);
  r.get("size_min", b.size_min);
  r.get("size_max", b.size_max);
  r.get("materialize_pairs", b.materialize_pairs);
  if (const json* conv = r.child("convergence")) b.convergence = parse_convergence(*conv);
  r.finish();
  return b;
}

CurationConfig parse_curation(const json& node) {
  CurationConfig c;
  ObjectReader r(node, "curation");
  r.get("methods", c.methods);
  r.get("restore_labels", c.restore_labels);
  r.get("k_inner", c.k_inner);
  r.get("n_outer", c.n_outer);
  r.get("train_counts", c.train_counts);
  r.get("test_counts", c.test_counts);
  r.get("flip_fraction", c.flip_fraction);
  r.finish();
  return c;
}

EstimateConfig parse_estimate(const json& node) {
  EstimateConfig e;
  ObjectReader r(node, "estimate");
  if (const json* pairs = r.child("pairs")) {
    require(pairs->is_array(), "estimate.pairs must be an array");
    for (std::size_t i = 0; i < pairs->size(); ++i) {
      ObjectReader p((*pairs)[i], "estimate.pairs[" + std::to_string(i) + "]");
      std::string d;
      std::string t;
      p.get("d", d);
      p.get("t", t);
      p.finish();
      e.pairs.push_back(PairFiles{d, t});
    }
  }
  r.get("compare_paths", e.compare_paths);
  r.finish();
  return e;
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::kBenchmark: return "benchmark";
    case Command::kCurate: return "curate";
    case Command::kEstimate: return "estimate";
  }
  return "unknown";
}

std::vector<CurationMethod> CurationConfig::parsed_methods() const {
  std::vector<CurationMethod> out;
  for (const auto& name : methods) {
    CurationMethod m{parse_curation_kind(name), false};
    if (m.kind == CurationKind::kDenoise) m.restore_labels = restore_labels;
    out.push_back(m);
  }
  return out;
}

RunConfig parse_config(Command command, const json& doc) {
  RunConfig c;
  c.command = command;
  c.workers = default_workers();
  ObjectReader r(doc, "config");
  r.get("seed", c.seed);
  std::string out = c.output_dir.string();
  r.get("output_dir", out);
  c.output_dir = out;
  r.get("c_values", c.c_values);
  std::string path(pmic::to_string(c.path));
  r.get("pmi_path", path);
  c.path = parse_pmi_path(path);
  r.get("append_bias", c.append_bias);
  r.get("mc_samples", c.mc_samples);
  r.get("workers", c.workers);
  r.get("skip_failures", c.skip_failures);
  if (const json* fit = r.child("fit")) {
    ObjectReader f(*fit, "fit");
    f.get("max_iter", c.fit.max_iter);
    f.get("grad_tol", c.fit.grad_tol);
    f.finish();
  }
  if (const json* corpus = r.child("corpus")) c.corpus = parse_corpus(*corpus);
  if (c.corpus.dim == 0) c.corpus.dim = command == Command::kCurate ? 100 : 20;
  const json* benchmark = r.child("benchmark");
  const json* curation = r.child("curation");
  const json* estimate = r.child("estimate");
  switch (command) {
    case Command::kBenchmark:
      if (benchmark) c.benchmark = parse_benchmark(*benchmark);
      break;
    case Command::kCurate:
      if (curation) c.curation = parse_curation(*curation);
      break;
    case Command::kEstimate:
      if (estimate) c.estimate = parse_estimate(*estimate);
      break;
  }
  r.finish();
  return c;
}

RunConfig load_config(Command command, const std::filesystem::path& file) {
  require_file(file, "config file");
  std::ifstream in(file);
  require(static_cast<bool>(in), "cannot open config file: " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file " + file.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(command, doc);
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.c_values) config.c_values = *overrides.c_values;
  if (overrides.path) config.path = parse_pmi_path(*overrides.path);
  if (overrides.workers) config.workers = *overrides.workers;
}

void RunConfig::validate() const {
  require(!output_dir.empty(), "output_dir must not be empty");
  require(!c_values.empty(), "c_values must not be empty");
  for (double c : c_values) PriorSpec(c, 1);
  require(mc_samples >= 1, "mc_samples must be >= 1");
  require(workers >= 1, "workers must be >= 1");
  fit.validate();

  require(corpus.source == "synthetic" || corpus.source == "emb1",
          "corpus.source must be \"synthetic\" or \"emb1\"");
  if (command != Command::kEstimate) {
    if (corpus.source == "emb1") {
      require_file(corpus.path, "corpus file");
    } else {
      require(corpus.dim >= 1, "corpus.dim must be >= 1");
      if (command == Command::kBenchmark) {
        require(corpus.per_class >= 1, "corpus.per_class must be >= 1");
        require(corpus.separation >= 0.0, "corpus.separation must be >= 0");
      } else {
        require(corpus.dim >= 2, "tagged corpus needs dim >= 2");
        require(corpus.per_category >= 1, "corpus.per_category must be >= 1");
      }
    }
  }

  switch (command) {
    case Command::kBenchmark: {
      require(benchmark.levels.size() >= 2, "benchmark.levels needs at least two entries");
      for (double l : benchmark.levels) {
        require(l >= 0.0 && l <= 1.0, "benchmark levels must lie in [0, 1] bits");
      }
      require(benchmark.k >= 1, "benchmark.k must be >= 1");
      require(benchmark.size_min >= 2 && benchmark.size_min <= benchmark.size_max,
              "benchmark sizes need 2 <= size_min <= size_max");
      if (const auto& conv = benchmark.convergence) {
        require(conv->model == "logistic" || conv->model == "conjugate",
                "convergence.model must be \"logistic\" or \"conjugate\"");
        require(conv->replications >= 2, "convergence.replications must be >= 2");
        require(!conv->k_grid.empty(), "convergence.k_grid must not be empty");
        require(conv->target_bits >= 0.0 && conv->target_bits <= 1.0,
                "convergence.target_bits must lie in [0, 1]");
        if (conv->c) PriorSpec(*conv->c, 1);
      }
      break;
    }
    case Command::kCurate: {
      require(!curation.methods.empty(), "curation.methods must not be empty");
      curation.parsed_methods();
      require(curation.k_inner >= 1 && curation.n_outer >= 1,
              "curation.k_inner and curation.n_outer must be >= 1");
      CurationPairSpec{curation.train_counts, curation.test_counts, curation.flip_fraction, seed}
          .validate();
      break;
    }
    case Command::kEstimate: {
      require(!estimate.pairs.empty(), "estimate.pairs needs at least one {d, t} entry");
      for (const auto& p : estimate.pairs) {
        require_file(p.d, "pair file");
        require_file(p.t, "pair file");
      }
      break;
    }
  }
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.generic_string();
  j["c_values"] = c.c_values;
  j["pmi_path"] = std::string(pmic::to_string(c.path));
  j["append_bias"] = c.append_bias;
  j["mc_samples"] = c.mc_samples;
  j["workers"] = c.workers;
  j["skip_failures"] = c.skip_failures;
  j["fit"] = {{"max_iter", c.fit.max_iter}, {"grad_tol", c.fit.grad_tol}};
  if (c.command != Command::kEstimate) {
    json corpus{{"source", c.corpus.source}};
    if (c.corpus.source == "emb1") {
      corpus["path"] = c.corpus.path.generic_string();
    } else if (c.command == Command::kBenchmark) {
      corpus["dim"] = c.corpus.dim;
      corpus["per_class"] = c.corpus.per_class;
      corpus["separation"] = c.corpus.separation;
    } else {
      corpus["dim"] = c.corpus.dim;
      corpus["per_category"] = c.corpus.per_category;
      corpus["essential_separation"] = c.corpus.essential_separation;
      corpus["nonessential_separation"] = c.corpus.nonessential_separation;
    }
    j["corpus"] = corpus;
  }
  switch (c.command) {
    case Command::kBenchmark: {
      const auto& b = c.benchmark;
      json bj{{"levels", b.levels},
              {"k", b.k},
              {"size_min", b.size_min},
              {"size_max", b.size_max},
              {"size_distribution", "uniform"},
              {"pool_sampling", "with-replacement"},
              {"materialize_pairs", b.materialize_pairs}};
      if (const auto& conv = b.convergence) {
        json cj{{"target_bits", conv->target_bits},
                {"k_grid", conv->k_grid},
                {"replications", conv->replications},
                {"model", conv->model}};
        if (conv->model == "logistic") {
          cj["c"] = conv->c.value_or(c.c_values.front());
        } else {
          cj["noise_var"] = conv->noise_var;
          cj["n_d"] = conv->n_d;
          cj["n_t"] = conv->n_t;
        }
        bj["convergence"] = cj;
      }
      j["benchmark"] = bj;
      break;
    }
    case Command::kCurate: {
      const auto& u = c.curation;
      j["curation"] = {{"methods", u.methods},
                       {"restore_labels", u.restore_labels},
                       {"k_inner", u.k_inner},
                       {"n_outer", u.n_outer},
                       {"train_counts", u.train_counts},
                       {"test_counts", u.test_counts},
                       {"flip_fraction", u.flip_fraction}};
      break;
    }
    case Command::kEstimate: {
      json pairs = json::array();
      for (const auto& p : c.estimate.pairs) {
        pairs.push_back({{"d", p.d.generic_string()}, {"t", p.t.generic_string()}});
      }
      j["estimate"] = {{"pairs", pairs}, {"compare_paths", c.estimate.compare_paths}};
      break;
    }
  }
  return j;
}

}  // namespace pmic::cli
