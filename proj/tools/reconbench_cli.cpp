#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rb/error.hpp"
#include "rb/io.hpp"
#include "rb/model_io.hpp"
#include "rb/pipeline.hpp"
#include "rb/report.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum class FlagType { Int, UInt, Real, Text, RealList, TextList };

struct FlagSpec {
  const char* flag;
  const char* key;
  FlagType type;
  const char* help;
};

const FlagSpec kFlags[] = {
    {"--root", "root", FlagType::Text, "dataset root directory"},
    {"--out", "out", FlagType::Text, "run output directory"},
    {"--seed", "seed", FlagType::UInt, "master seed"},
    {"--workers", "workers", FlagType::Int, "worker threads (0 = all cores)"},
    {"--classes", "classes", FlagType::Int, "synthetic class count"},
    {"--per-class", "per_class", FlagType::Int, "shapes in the smallest class"},
    {"--size-spread", "size_spread", FlagType::Real, "relative growth of class size across classes"},
    {"--jitter", "jitter", FlagType::Real, "relative parameter jitter in [0, 0.9]"},
    {"--contamination", "contamination", FlagType::Real, "probability a test shape copies a training shape"},
    {"--ratios", "ratios", FlagType::RealList, "train,val,test fractions"},
    {"--frame", "frame", FlagType::Text, "object or viewer"},
    {"--resolution", "resolution", FlagType::Int, "ground-truth grid resolution"},
    {"--poses", "poses", FlagType::Int, "viewpoints per shape in the viewer frame"},
    {"--low-resolution", "low_resolution", FlagType::Int, "grid resolution for clustering and similarity"},
    {"--downsample-frac", "downsample_frac", FlagType::Real, "block occupancy needed when downsampling"},
    {"--k", "k", FlagType::UInt, "cluster count"},
    {"--dim", "dim", FlagType::UInt, "descriptor dimension"},
    {"--tau-grid", "tau_grid", FlagType::RealList, "candidate mean-shape thresholds"},
    {"--similarity", "similarity", FlagType::Text, "descriptor matching: cosine or euclidean"},
    {"--kmeans-iters", "kmeans_iters", FlagType::Int, "maximum Lloyd iterations"},
    {"--methods", "methods", FlagType::TextList, "comma list of cluster,retrieval,oracle_nn"},
    {"--d", "d", FlagType::Real, "F-score distance threshold (fraction of side length)"},
    {"--samples", "samples", FlagType::UInt, "surface samples per shape"},
    {"--cd-clamp", "cd_clamp", FlagType::Real, "clamp per-point Chamfer distances"},
    {"--sweep", "sweep", FlagType::RealList, "ascending thresholds for the F-score sweep"},
    {"--alpha", "alpha", FlagType::Real, "KS significance level"},
    {"--ks-mode", "ks_mode", FlagType::Text, "raw or binned"},
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& flag, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  rb::fail_usage(flag + ": '" + s + "' is not a number");
}

long long to_int(const std::string& flag, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  rb::fail_usage(flag + ": '" + s + "' is not an integer");
}

json flag_value(const FlagSpec& spec, const std::string& raw) {
  switch (spec.type) {
    case FlagType::Int: return to_int(spec.flag, raw);
    case FlagType::UInt: {
      const long long v = to_int(spec.flag, raw);
      if (v < 0) rb::fail_usage(std::string(spec.flag) + " must be non-negative");
      return static_cast<std::uint64_t>(v);
    }
    case FlagType::Real: return to_real(spec.flag, raw);
    case FlagType::Text: return raw;
    case FlagType::RealList: {
      json list = json::array();
      for (const auto& item : split_list(raw)) list.push_back(to_real(spec.flag, item));
      return list;
    }
    case FlagType::TextList: return split_list(raw);
  }
  return nullptr;
}

// Flag values collected per subcommand; applied on top of the config file.
struct FlagValues {
  std::map<std::string, std::string> raw;
};

void add_config_flags(CLI::App* cmd, FlagValues& values) {
  for (const auto& spec : kFlags) {
    cmd->add_option_function<std::string>(
        spec.flag, [&values, key = std::string(spec.key)](const std::string& v) { values.raw[key] = v; }, spec.help);
  }
}

rb::RunConfig resolve_config(const std::string& config_file, const FlagValues& values) {
  rb::RunConfig config;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) rb::fail_usage("cannot open config file " + config_file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& ex) {
      rb::fail_usage(config_file + ": " + ex.what());
    }
    config = rb::config_from_json(j);
  }
  json overrides = json::object();
  for (const auto& spec : kFlags) {
    const auto it = values.raw.find(spec.key);
    if (it != values.raw.end()) overrides[spec.key] = flag_value(spec, it->second);
  }
  config = rb::config_from_json(overrides, config);
  rb::validate_config(config);
  return config;
}

int exit_code(rb::ErrorKind kind) { return static_cast<int>(kind); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction benchmark: recognition baselines, shape metrics and statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file, "JSON file supplying any of the flags");
  app.set_version_flag("--version", "reconbench 1.0.0\nVXBG format " + std::to_string(rb::kVxbgVersion) +
                                        "\nRBMD format " + std::to_string(rb::kModelVersion));

  FlagValues flags;
  std::string report_override;
  std::string dir_override;
  std::string item;
  std::string method = "oracle_nn";

  auto* gen = app.add_subcommand("gen", "generate the synthetic dataset (meshes and manifest)");
  auto* split = app.add_subcommand("split", "per-class train/val/test split");
  auto* mat = app.add_subcommand("materialize", "voxelize ground truth in the object or viewer frame");
  auto* fit = app.add_subcommand("fit", "fit a baseline model");
  fit->require_subcommand(1);
  auto* fit_cluster = fit->add_subcommand("cluster", "k-means clusters with thresholded mean shapes");
  auto* fit_retrieval = fit->add_subcommand("retrieval", "IoU-similarity embedding for retrieval");
  auto* predict = app.add_subcommand("predict", "write predictions for every test item");
  auto* eval = app.add_subcommand("eval", "score predictions and write the JSON report");
  auto* stats = app.add_subcommand("stats", "statistics over a saved report");
  stats->require_subcommand(1);
  auto* stats_ks = stats->add_subcommand("ks", "pairwise KS heatmaps");
  auto* stats_sweep = stats->add_subcommand("sweep", "F-score over distance thresholds");
  auto* stats_corr = stats->add_subcommand("corr", "class size vs. per-class mIoU");
  auto* stats_cutoff = stats->add_subcommand("cutoff", "share of shapes above each score");
  auto* stats_tables = stats->add_subcommand("tables", "per-class tables, box-plot data and histograms");
  auto* stats_all = stats->add_subcommand("all", "every statistics output");
  auto* viz = app.add_subcommand("viz", "visualization exports");
  viz->require_subcommand(1);
  auto* viz_pr = viz->add_subcommand("pr", "colorized precision/recall point clouds");
  auto* run = app.add_subcommand("run", "full pipeline from generation to statistics");

  for (auto* cmd : {gen, split, mat, fit_cluster, fit_retrieval, predict, eval, stats_ks, stats_sweep, stats_corr,
                    stats_cutoff, stats_tables, stats_all, viz_pr, run}) {
    add_config_flags(cmd, flags);
  }
  for (auto* cmd : {stats_ks, stats_sweep, stats_corr, stats_cutoff, stats_tables, stats_all}) {
    cmd->add_option("--report", report_override, "report JSON (default <out>/report.json)");
    cmd->add_option("--dir", dir_override, "output directory (default <out>/reports)");
  }
  viz_pr->add_option("--item", item, "test item id")->required();
  viz_pr->add_option("--method", method, "method whose prediction is shown");
  viz_pr->add_option("--dir", dir_override, "output directory (default <out>/viz)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(rb::ErrorKind::Usage);
  }

  try {
    const rb::RunConfig config = resolve_config(config_file, flags);
    const auto load = [&]() { return rb::load_report(report_override.empty() ? rb::report_path(config) : fs::path(report_override)); };
    const fs::path out_dir = dir_override.empty() ? rb::reports_dir(config) : fs::path(dir_override);

    if (gen->parsed()) {
      const auto m = rb::generate_dataset(config);
      std::printf("generated %zu shapes in %zu classes under %s\n", m.shapes.size(), m.classes.size(),
                  config.root.string().c_str());
    } else if (split->parsed()) {
      const auto s = rb::run_split(config);
      std::printf("split: %zu train, %zu val, %zu test\n", s.train.size(), s.val.size(), s.test.size());
    } else if (mat->parsed()) {
      const auto set = rb::run_materialize(config);
      std::printf("materialized %zu %s-frame grids at %d^3\n", set.records.size(), rb::frame_name(set.frame).c_str(),
                  set.resolution);
    } else if (fit_cluster->parsed()) {
      rb::fit_cluster(config);
      std::printf("cluster model written to %s\n", (config.out / "models" / "cluster.rbmd").string().c_str());
    } else if (fit_retrieval->parsed()) {
      rb::fit_retrieval(config);
      std::printf("retrieval model written to %s\n", (config.out / "models" / "retrieval.rbmd").string().c_str());
    } else if (predict->parsed()) {
      rb::predict(config);
      std::printf("predictions written under %s\n", (config.out / "predictions").string().c_str());
    } else if (eval->parsed()) {
      const auto report = rb::evaluate_run(config);
      rb::save_report(rb::report_path(config), report);
      std::printf("%zu entries, %zu skips; report written to %s\n", report.entries.size(), report.skips.size(),
                  rb::report_path(config).string().c_str());
    } else if (stats_ks->parsed()) {
      rb::emit_ks(load(), out_dir, config);
    } else if (stats_sweep->parsed()) {
      rb::emit_sweep(load(), out_dir);
    } else if (stats_corr->parsed()) {
      rb::emit_correlation(load(), out_dir, rb::class_train_sizes(config));
    } else if (stats_cutoff->parsed()) {
      rb::emit_cutoff(load(), out_dir);
    } else if (stats_tables->parsed()) {
      const auto report = load();
      rb::emit_tables(report, out_dir);
      rb::emit_histograms(report, out_dir);
    } else if (stats_all->parsed()) {
      const auto report = load();
      rb::emit_tables(report, out_dir);
      rb::emit_histograms(report, out_dir);
      rb::emit_ks(report, out_dir, config);
      rb::emit_sweep(report, out_dir);
      rb::emit_cutoff(report, out_dir);
      rb::emit_correlation(report, out_dir, rb::class_train_sizes(config));
    } else if (viz_pr->parsed()) {
      const fs::path dir = dir_override.empty() ? config.out / "viz" : fs::path(dir_override);
      for (const auto& p : rb::viz_pr(config, method, item, dir)) std::printf("%s\n", p.string().c_str());
    } else if (run->parsed()) {
      rb::run_all(config);
      std::printf("run complete; reports under %s\n", rb::reports_dir(config).string().c_str());
    }
  } catch (const rb::Error& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return exit_code(ex.kind());
  } catch (const fs::filesystem_error& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return exit_code(rb::ErrorKind::Data);
  } catch (const nlohmann::json::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return exit_code(rb::ErrorKind::Data);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "internal error: %s\n", ex.what());
    return exit_code(rb::ErrorKind::Invariant);
  }
  return 0;
}
