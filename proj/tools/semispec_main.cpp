#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semispec/errors.hpp"
#include "semispec/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int runSubcommand(const std::string& name, const CommonOptions& opts) {
  semispec::RunConfig config;
  try {
    config = semispec::loadConfigFile(opts.config_path);
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
    if (opts.seed_set) config.seed = opts.seed;
  } catch (const semispec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    const semispec::StageSet stages = semispec::StageSet::forSubcommand(name);
    const semispec::RunResult result = semispec::runPipeline(config, stages);
    semispec::writeRunResult(result, config.output_dir);
    std::cout << (result.all_pass ? "PASS" : "FAIL") << ": report written to "
              << config.output_dir << "/report.json\n";
    return result.all_pass ? 0 : 2;
  } catch (const semispec::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semispec: semigroup resolvent and spectral decomposition toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"decompose", "verify", "ledger", "reconstruct",
                                          "scan"};
  const std::vector<std::string> descriptions = {
      "locate poles, build Riesz projectors, check both remainder paths",
      "run the full pipeline: scans, ledger, decomposition, decay checks",
      "measure C1/C2/C_D and evaluate the explicit constants ledger",
      "truncated Bromwich inversion convergence study",
      "assumption scans only"};

  CommonOptions opts;
  std::string chosen;
  for (size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
    sub->add_option("--output-dir", opts.output_dir, "output directory override");
    sub->add_option("--seed", opts.seed, "seed override")->each([&opts](const std::string&) {
      opts.seed_set = true;
    });
    sub->callback([&chosen, name = names[i]] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return runSubcommand(chosen, opts);
}
