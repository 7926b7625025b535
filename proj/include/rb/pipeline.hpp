#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rb/dataset.hpp"
#include "rb/embedding.hpp"
#include "rb/metrics.hpp"
#include "rb/stats.hpp"

namespace rb {

inline const std::vector<std::string> kMethods = {"cluster", "retrieval", "oracle_nn"};
inline const std::vector<std::string> kMetrics = {"iou", "chamfer", "precision", "recall", "fscore"};

struct RunConfig {
  std::filesystem::path root = "data";
  std::filesystem::path out = "run";
  std::uint64_t seed = 7;
  int workers = 0;

  // dataset generation
  int classes = 8;
  int per_class = 40;
  double size_spread = 0.5;  // class i gets per_class * (1 + spread * i / (classes - 1)) shapes
  double jitter = 0.35;
  std::optional<double> contamination;
  SplitRatios ratios = kDefaultRatios;

  // materialization
  Frame frame = Frame::Object;
  int resolution = 64;
  int poses = 5;

  // baselines
  int low_resolution = 32;
  double downsample_frac = 0.5;
  std::size_t k = 16;
  std::size_t dim = 32;
  std::vector<float> tau_grid;
  SimilarityMode similarity = SimilarityMode::Cosine;
  int kmeans_iters = 100;
  std::vector<std::string> methods = kMethods;

  // evaluation and statistics
  MetricConfig metric;
  std::vector<double> sweep = {0.0025, 0.005, 0.0075, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05};
  double alpha = 0.05;
  KsMode ks_mode = KsMode::Raw;
};

// Unknown keys are rejected. Missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);
void validate_config(const RunConfig& config);
// The subset of the configuration that determines results (paths and worker
// count are excluded so reports are comparable across machines).
nlohmann::json config_snapshot(const RunConfig& config);

Manifest generate_dataset(const RunConfig& config);
Split run_split(const RunConfig& config);
GridSet run_materialize(const RunConfig& config);

void fit_cluster(const RunConfig& config);
void fit_retrieval(const RunConfig& config);
void predict(const RunConfig& config);

std::filesystem::path prediction_path(const RunConfig& config, const std::string& method, const std::string& item);
std::filesystem::path report_path(const RunConfig& config);
std::filesystem::path reports_dir(const RunConfig& config);

EvalReport evaluate_run(const RunConfig& config);

// Per-class training-set sizes, used for the class size vs. accuracy correlation.
std::map<std::string, std::size_t> class_train_sizes(const RunConfig& config);

void emit_tables(const EvalReport& report, const std::filesystem::path& dir);
void emit_histograms(const EvalReport& report, const std::filesystem::path& dir);
void emit_ks(const EvalReport& report, const std::filesystem::path& dir, const RunConfig& config);
void emit_sweep(const EvalReport& report, const std::filesystem::path& dir);
void emit_cutoff(const EvalReport& report, const std::filesystem::path& dir);
void emit_correlation(const EvalReport& report, const std::filesystem::path& dir,
                      const std::map<std::string, std::size_t>& train_sizes);
void emit_reports(const EvalReport& report, const RunConfig& config);

// Colorized precision and recall point clouds for one test item.
std::vector<std::filesystem::path> viz_pr(const RunConfig& config, const std::string& method, const std::string& item,
                                          const std::filesystem::path& dir);

void run_all(const RunConfig& config);

}  // namespace rb
