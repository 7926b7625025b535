#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rb/stats.hpp"

namespace rb {

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Pretty-printed, key order fixed, so equal reports serialize to equal bytes.
void save_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport load_report(const std::filesystem::path& path);

nlohmann::json to_json(const Summary& s);

// CSV cells use 6 significant digits with a decimal dot.
std::string csv_number(double v);

// Buffers rows and writes the file on destruction.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& row(const std::vector<std::string>& cells);

 private:
  std::filesystem::path path_;
  std::string buffer_;
};

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateTable>& tables);
void write_histogram_csv(const std::filesystem::path& path, const std::vector<std::string>& row_labels,
                         const std::vector<std::vector<std::size_t>>& rows, double lo, double hi);
void write_heatmap_csv(const std::filesystem::path& path, const KsHeatmap& heatmap);

}  // namespace rb
