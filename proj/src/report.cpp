#include "semispec/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "semispec/errors.hpp"

namespace semispec {

std::string formatDouble17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void writeCsv(const CsvSeries& series, const std::string& directory) {
  std::filesystem::create_directories(directory);
  const std::filesystem::path path =
      std::filesystem::path(directory) / (series.name + ".csv");
  std::ofstream out(path);
  if (!out) throw Error("cannot write CSV file: " + path.string());
  for (size_t i = 0; i < series.columns.size(); ++i) {
    out << (i ? "," : "") << series.columns[i];
  }
  out << "\n";
  for (const auto& row : series.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << formatDouble17(row[i]);
    }
    out << "\n";
  }
}

std::string serializeReport(const nlohmann::ordered_json& report) {
  return report.dump(2) + "\n";
}

nlohmann::ordered_json parseReport(const std::string& text) {
  return nlohmann::ordered_json::parse(text);
}

nlohmann::ordered_json stripTiming(nlohmann::ordered_json report) {
  report.erase("timing");
  return report;
}

}  // namespace semispec
