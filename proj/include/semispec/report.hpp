#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace semispec {

// A plot-ready series: one CSV file, header row + 17-significant-digit rows.
struct CsvSeries {
  std::string name;  // file stem, "<stage>_<quantity>"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string formatDouble17(double v);
void writeCsv(const CsvSeries& series, const std::string& directory);

// report.json round-trip helpers. Reports are ordered JSON documents so
// identical runs serialize byte-identically (timing aside).
std::string serializeReport(const nlohmann::ordered_json& report);
nlohmann::ordered_json parseReport(const std::string& text);

// Strip volatile fields before comparing two reports.
nlohmann::ordered_json stripTiming(nlohmann::ordered_json report);

}  // namespace semispec
