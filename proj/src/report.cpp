#include "rb/report.hpp"

#include <cstdio>
#include <fstream>

#include "rb/error.hpp"

namespace rb {

using nlohmann::json;

json to_json(const EvalReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"shape", e.shape_id}, {"class", e.class_label}, {"method", e.method},
                       {"metric", e.metric}, {"value", e.value}});
  }
  json skips = json::array();
  for (const auto& s : report.skips) {
    skips.push_back({{"shape", s.shape_id}, {"class", s.class_label}, {"method", s.method}, {"reason", s.reason}});
  }
  json sweeps = json::array();
  for (const auto& s : report.sweeps) {
    sweeps.push_back({{"shape", s.shape_id}, {"class", s.class_label}, {"method", s.method}, {"fscore", s.fscore}});
  }
  json config = report.config_json.empty() ? json::object() : json::parse(report.config_json);
  return {{"format", "reconbench-report"},
          {"version", 1},
          {"metadata", {{"config", config}, {"dataset_hash", report.dataset_hash}}},
          {"entries", entries},
          {"skips", skips},
          {"sweep_thresholds", report.sweep_thresholds},
          {"sweeps", sweeps}};
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport r;
    for (const auto& e : j.at("entries")) {
      r.entries.push_back({e.at("shape").get<std::string>(), e.at("class").get<std::string>(),
                           e.at("method").get<std::string>(), e.at("metric").get<std::string>(),
                           e.at("value").get<double>()});
    }
    for (const auto& s : j.at("skips")) {
      r.skips.push_back({s.at("shape").get<std::string>(), s.at("class").get<std::string>(),
                         s.at("method").get<std::string>(), s.at("reason").get<std::string>()});
    }
    r.sweep_thresholds = j.at("sweep_thresholds").get<std::vector<double>>();
    for (const auto& s : j.at("sweeps")) {
      r.sweeps.push_back({s.at("shape").get<std::string>(), s.at("class").get<std::string>(),
                          s.at("method").get<std::string>(), s.at("fscore").get<std::vector<double>>()});
    }
    const auto& meta = j.at("metadata");
    r.config_json = meta.at("config").dump();
    r.dataset_hash = meta.at("dataset_hash").get<std::string>();
    validate_report(r);
    return r;
  } catch (const json::exception& ex) {
    fail(std::string("malformed report: ") + ex.what());
  }
}

void save_report(const std::filesystem::path& path, const EvalReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << to_json(report).dump(1) << '\n';
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& ex) {
    fail(path.string() + ": " + ex.what());
  }
}

json to_json(const Summary& s) {
  return {{"n", s.n},   {"mean", s.mean}, {"median", s.median}, {"q1", s.q1},
          {"q3", s.q3}, {"min", s.min},   {"max", s.max},       {"std", s.std}};
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
    if (quote) {
      buffer_ += '"';
      for (char c : cells[i]) {
        if (c == '"') buffer_ += '"';
        buffer_ += c;
      }
      buffer_ += '"';
    } else {
      buffer_ += cells[i];
    }
  }
  buffer_ += '\n';
  return *this;
}

CsvWriter::~CsvWriter() {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary);
  out << buffer_;
}

namespace {

std::vector<std::string> summary_cells(const Summary& s) {
  return {std::to_string(s.n), csv_number(s.mean), csv_number(s.median), csv_number(s.q1),
          csv_number(s.q3),    csv_number(s.min),  csv_number(s.max),    csv_number(s.std)};
}

}  // namespace

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateTable>& tables) {
  CsvWriter csv(path);
  csv.row({"method", "class", "n", "mean", "median", "q1", "q3", "min", "max", "std"});
  for (const auto& t : tables) {
    for (const auto& c : t.classes) {
      auto cells = summary_cells(c.summary);
      cells.insert(cells.begin(), {t.method, c.class_label});
      csv.row(cells);
    }
    auto cells = summary_cells(t.overall);
    cells.insert(cells.begin(), {t.method, "ALL"});
    csv.row(cells);
  }
}

void write_histogram_csv(const std::filesystem::path& path, const std::vector<std::string>& row_labels,
                         const std::vector<std::vector<std::size_t>>& rows, double lo, double hi) {
  CsvWriter csv(path);
  std::vector<std::string> header{"class"};
  const std::size_t bins = rows.empty() ? 0 : rows.front().size();
  const double width = bins ? (hi - lo) / static_cast<double>(bins) : 0.0;
  for (std::size_t b = 0; b < bins; ++b) header.push_back(csv_number(lo + width * static_cast<double>(b)));
  csv.row(header);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> cells{row_labels[r]};
    for (auto c : rows[r]) cells.push_back(std::to_string(c));
    csv.row(cells);
  }
}

void write_heatmap_csv(const std::filesystem::path& path, const KsHeatmap& heatmap) {
  CsvWriter csv(path);
  std::vector<std::string> header{"method"};
  header.insert(header.end(), heatmap.methods.begin(), heatmap.methods.end());
  csv.row(header);
  for (std::size_t i = 0; i < heatmap.methods.size(); ++i) {
    std::vector<std::string> cells{heatmap.methods[i]};
    for (auto c : heatmap.counts[i]) cells.push_back(std::to_string(c));
    csv.row(cells);
  }
}

}  // namespace rb
