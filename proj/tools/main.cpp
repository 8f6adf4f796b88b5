#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pmic/error.hpp"
#include "pmic/version.hpp"
#include "pmic_cli/commands.hpp"

namespace {

struct Flags {
  std::string config;
  pmic::cli::Overrides overrides;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Flags& flags) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", flags.config, "JSON config document")->required();
  sub->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& v) { flags.overrides.seed = v; }, "master seed");
  sub->add_option_function<std::string>(
      "--out", [&](const std::string& v) { flags.overrides.output_dir = v; }, "output directory");
  sub->add_option_function<std::vector<double>>(
         "--c-values", [&](const std::vector<double>& v) { flags.overrides.c_values = v; },
         "prior variances, comma separated")
      ->delimiter(',');
  sub->add_option_function<std::string>(
         "--path", [&](const std::string& v) { flags.overrides.path = v; }, "PMI path")
      ->check(CLI::IsMember({"gaussian", "eta", "mc", "gaussian-closed-form", "eta-point",
                             "monte-carlo"}));
  sub->add_option_function<int>(
         "--workers", [&](const int& v) { flags.overrides.workers = v; }, "worker threads")
      ->check(CLI::PositiveNumber);
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores data-curation methods by the PMI between curated training and test data"};
  app.set_version_flag("--version", std::string(pmic::kToolVersion) + " (" + pmic::kBuildId + ")");
  app.require_subcommand(1);
  Flags flags;
  CLI::App* benchmark = add_command(app, "benchmark", "ground-truth MI benchmark", flags);
  CLI::App* curate = add_command(app, "curate", "curation-method evaluation", flags);
  add_command(app, "estimate", "PMI estimate over EMB1 pair files", flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  using pmic::cli::Command;
  const Command command = benchmark->parsed() ? Command::kBenchmark
                          : curate->parsed()  ? Command::kCurate
                                              : Command::kEstimate;
  try {
    pmic::cli::RunConfig config = pmic::cli::load_config(command, flags.config);
    pmic::cli::apply_overrides(config, flags.overrides);
    const auto result = pmic::cli::run(config);
    for (const auto& file : result.files) std::cout << "wrote " << file.generic_string() << '\n';
    return 0;
  } catch (const pmic::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pmic::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
}
