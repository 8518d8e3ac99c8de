#pragma once

#include <map>
#include <string>
#include <vector>

#include "semispec/config.hpp"
#include "semispec/report.hpp"

namespace semispec {

struct StageSet {
  bool scans = false;
  bool ledger = false;
  bool decomposition = false;
  bool decay = false;
  bool reconstruct = false;

  static StageSet forSubcommand(const std::string& name);
};

struct RunResult {
  nlohmann::ordered_json report;
  std::vector<CsvSeries> series;
  bool all_pass = true;
};

// Runs the selected stages (plus their prerequisites) and assembles the
// machine-readable report. Check failures are recorded, not thrown; only
// configuration problems escape as ConfigError.
RunResult runPipeline(const RunConfig& config, const StageSet& stages);

// Writes report.json and the series CSVs into output_dir.
void writeRunResult(const RunResult& result, const std::string& output_dir);

}  // namespace semispec
