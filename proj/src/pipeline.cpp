#include "rb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "rb/cluster_model.hpp"
#include "rb/error.hpp"
#include "rb/io.hpp"
#include "rb/marching_cubes.hpp"
#include "rb/model_io.hpp"
#include "rb/oracle.hpp"
#include "rb/random.hpp"
#include "rb/report.hpp"
#include "rb/sampling.hpp"
#include "rb/synthetic.hpp"
#include "rb/voxelize.hpp"

namespace rb {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

namespace {

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail_usage("config key '" + key + "' has the wrong type");
  }
}

std::string similarity_name(SimilarityMode m) { return m == SimilarityMode::Cosine ? "cosine" : "euclidean"; }

SimilarityMode parse_similarity(const std::string& s) {
  if (s == "cosine") return SimilarityMode::Cosine;
  if (s == "euclidean") return SimilarityMode::Euclidean;
  fail_usage("unknown similarity mode '" + s + "' (expected cosine or euclidean)");
}

std::string ks_mode_name(KsMode m) { return m == KsMode::Raw ? "raw" : "binned"; }

KsMode parse_ks_mode(const std::string& s) {
  if (s == "raw") return KsMode::Raw;
  if (s == "binned") return KsMode::Binned;
  fail_usage("unknown ks mode '" + s + "' (expected raw or binned)");
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) fail_usage("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "root") c.root = get_as<std::string>(v, key);
    else if (key == "out") c.out = get_as<std::string>(v, key);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
    else if (key == "workers") c.workers = get_as<int>(v, key);
    else if (key == "classes") c.classes = get_as<int>(v, key);
    else if (key == "per_class") c.per_class = get_as<int>(v, key);
    else if (key == "size_spread") c.size_spread = get_as<double>(v, key);
    else if (key == "jitter") c.jitter = get_as<double>(v, key);
    else if (key == "contamination") {
      if (v.is_null()) c.contamination.reset();
      else c.contamination = get_as<double>(v, key);
    }
    else if (key == "ratios") {
      const auto r = get_as<std::vector<double>>(v, key);
      if (r.size() != 3) fail_usage("ratios needs three values (train, val, test)");
      c.ratios = {r[0], r[1], r[2]};
    }
    else if (key == "frame") c.frame = parse_frame(get_as<std::string>(v, key));
    else if (key == "resolution") c.resolution = get_as<int>(v, key);
    else if (key == "poses") c.poses = get_as<int>(v, key);
    else if (key == "low_resolution") c.low_resolution = get_as<int>(v, key);
    else if (key == "downsample_frac") c.downsample_frac = get_as<double>(v, key);
    else if (key == "k") c.k = get_as<std::size_t>(v, key);
    else if (key == "dim") c.dim = get_as<std::size_t>(v, key);
    else if (key == "tau_grid") c.tau_grid = get_as<std::vector<float>>(v, key);
    else if (key == "similarity") c.similarity = parse_similarity(get_as<std::string>(v, key));
    else if (key == "kmeans_iters") c.kmeans_iters = get_as<int>(v, key);
    else if (key == "methods") c.methods = get_as<std::vector<std::string>>(v, key);
    else if (key == "d") c.metric.d = get_as<double>(v, key);
    else if (key == "samples") c.metric.sample_count = get_as<std::size_t>(v, key);
    else if (key == "cd_clamp") {
      if (v.is_null()) c.metric.cd_clamp.reset();
      else c.metric.cd_clamp = get_as<double>(v, key);
    }
    else if (key == "sweep") c.sweep = get_as<std::vector<double>>(v, key);
    else if (key == "alpha") c.alpha = get_as<double>(v, key);
    else if (key == "ks_mode") c.ks_mode = parse_ks_mode(get_as<std::string>(v, key));
    else fail_usage("unknown config key '" + key + "'");
  }
  return c;
}

json config_snapshot(const RunConfig& c) {
  json j = {{"seed", c.seed},
            {"classes", c.classes},
            {"per_class", c.per_class},
            {"size_spread", c.size_spread},
            {"jitter", c.jitter},
            {"contamination", c.contamination ? json(*c.contamination) : json(nullptr)},
            {"ratios", std::vector<double>(c.ratios.begin(), c.ratios.end())},
            {"frame", frame_name(c.frame)},
            {"resolution", c.resolution},
            {"poses", c.poses},
            {"low_resolution", c.low_resolution},
            {"downsample_frac", c.downsample_frac},
            {"k", c.k},
            {"dim", c.dim},
            {"tau_grid", c.tau_grid.empty() ? default_tau_grid() : c.tau_grid},
            {"similarity", similarity_name(c.similarity)},
            {"kmeans_iters", c.kmeans_iters},
            {"methods", c.methods},
            {"d", c.metric.d},
            {"samples", c.metric.sample_count},
            {"cd_clamp", c.metric.cd_clamp ? json(*c.metric.cd_clamp) : json(nullptr)},
            {"sweep", c.sweep},
            {"alpha", c.alpha},
            {"ks_mode", ks_mode_name(c.ks_mode)}};
  return j;
}

json config_to_json(const RunConfig& c) {
  json j = config_snapshot(c);
  j["root"] = c.root.string();
  j["out"] = c.out.string();
  j["workers"] = c.workers;
  return j;
}

void validate_config(const RunConfig& c) {
  if (c.classes < 1) fail_usage("classes must be at least 1");
  if (c.per_class < 1) fail_usage("per_class must be at least 1");
  if (!(c.size_spread >= 0.0)) fail_usage("size_spread must be non-negative");
  if (c.resolution < 8 || c.resolution > 512) fail_usage("resolution must lie in [8, 512]");
  if (c.low_resolution < 1 || c.resolution % c.low_resolution != 0) {
    fail_usage("low_resolution must divide resolution");
  }
  if (!(c.downsample_frac > 0.0 && c.downsample_frac <= 1.0)) fail_usage("downsample_frac must lie in (0, 1]");
  if (c.poses < 1) fail_usage("poses must be at least 1");
  if (c.k < 1) fail_usage("k must be at least 1");
  if (c.dim < 1) fail_usage("dim must be at least 1");
  if (c.kmeans_iters < 1) fail_usage("kmeans_iters must be at least 1");
  if (!(c.metric.d > 0.0)) fail_usage("d must be positive");
  if (c.metric.sample_count < 1) fail_usage("samples must be at least 1");
  if (c.metric.cd_clamp && !(*c.metric.cd_clamp > 0.0)) fail_usage("cd_clamp must be positive");
  if (c.sweep.empty() || !std::is_sorted(c.sweep.begin(), c.sweep.end())) {
    fail_usage("sweep thresholds must be nonempty and ascending");
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail_usage("alpha must lie in (0, 1)");
  if (c.workers < 0) fail_usage("workers must be non-negative");
  if (c.methods.empty()) fail_usage("at least one method is required");
  for (const auto& m : c.methods) {
    if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
      fail_usage("unknown method '" + m + "' (expected cluster, retrieval or oracle_nn)");
    }
  }
  if (c.contamination && !(*c.contamination >= 0.0 && *c.contamination <= 1.0)) {
    fail_usage("contamination must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------- helpers

namespace {

int worker_count(const RunConfig& c) { return c.workers > 0 ? c.workers : omp_get_max_threads(); }

void throw_first(const std::vector<std::string>& errors) {
  for (const auto& e : errors) {
    if (!e.empty()) fail(e);
  }
}

std::vector<VoxelGrid> load_grids(const fs::path& root, const std::vector<const GridRecord*>& records, int workers) {
  std::vector<VoxelGrid> grids(records.size());
  std::vector<std::string> errors(records.size());
  const auto n = static_cast<long long>(records.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
  for (long long i = 0; i < n; ++i) {
    try {
      grids[i] = load_vxbg(root / records[i]->path);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  }
  throw_first(errors);
  return grids;
}

std::vector<VoxelGrid> downsample_all(const std::vector<VoxelGrid>& grids, const RunConfig& c) {
  std::vector<VoxelGrid> low;
  low.reserve(grids.size());
  for (const auto& g : grids) low.push_back(downsample(g, c.resolution / c.low_resolution, c.downsample_frac));
  return low;
}

struct Partition {
  GridSet set;
  std::vector<const GridRecord*> train;
  std::vector<const GridRecord*> test;
};

// Train and test items of the materialized set selected by the configuration.
// Validation shapes are not used by the oracle baselines.
std::unique_ptr<Partition> load_partition(const RunConfig& c) {
  auto p = std::make_unique<Partition>();
  p->set = load_grid_set(c.root, c.resolution, c.frame);
  const Split split = load_split(c.root);
  const std::set<std::string> train(split.train.begin(), split.train.end());
  const std::set<std::string> test(split.test.begin(), split.test.end());
  for (const auto& r : p->set.records) {
    if (train.count(r.shape_id)) p->train.push_back(&r);
    else if (test.count(r.shape_id)) p->test.push_back(&r);
  }
  if (p->train.empty()) fail("split has no training shapes in the materialized set");
  if (p->test.empty()) fail("split has no test shapes in the materialized set");
  return p;
}

fs::path model_path(const RunConfig& c, const std::string& name) { return c.out / "models" / (name + ".rbmd"); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t hash_file(const fs::path& path, std::uint64_t h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str(), h);
}

}  // namespace

fs::path prediction_path(const RunConfig& c, const std::string& method, const std::string& item) {
  return c.out / "predictions" / method / (item + ".vxbg");
}

fs::path report_path(const RunConfig& c) { return c.out / "report.json"; }
fs::path reports_dir(const RunConfig& c) { return c.out / "reports"; }

// ---------------------------------------------------------------- dataset stages

Manifest generate_dataset(const RunConfig& c) {
  validate_config(c);
  Manifest manifest;
  manifest.seed = c.seed;
  const int recipe_count = static_cast<int>(std::size(kAllRecipes));
  std::vector<Recipe> shape_recipe;
  for (int ci = 0; ci < c.classes; ++ci) {
    const Recipe recipe = kAllRecipes[ci % recipe_count];
    std::string label(recipe_name(recipe));
    if (ci >= recipe_count) label += "_" + std::to_string(ci / recipe_count);
    manifest.classes.push_back(label);
    const double step = c.classes > 1 ? static_cast<double>(ci) / (c.classes - 1) : 0.0;
    const int count = c.per_class + static_cast<int>(std::floor(c.per_class * c.size_spread * step + 0.5));
    for (int i = 0; i < count; ++i) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_%03d", i);
      const std::string id = label + suffix;
      manifest.shapes.push_back({id, label, "meshes/" + id + ".ply"});
      shape_recipe.push_back(recipe);
    }
  }

  std::vector<ShapeSpec> specs(manifest.shapes.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    specs[i].class_id = manifest.shapes[i].class_label;
    specs[i].recipe = shape_recipe[i];
    specs[i].jitter = c.jitter;
    specs[i].seed = derive_seed(c.seed, "shape/" + manifest.shapes[i].id);
  }
  if (c.contamination) {
    // Roles follow the split that `split` will reproduce from the same seed.
    const Split split = split_dataset(manifest, c.ratios, c.seed);
    const std::set<std::string> train(split.train.begin(), split.train.end());
    std::map<std::string, std::vector<std::uint64_t>> pools;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (train.count(manifest.shapes[i].id)) pools[specs[i].class_id].push_back(specs[i].seed);
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const bool is_train = train.count(manifest.shapes[i].id) > 0;
      specs[i].role = is_train ? SplitRole::Train : SplitRole::Test;
      specs[i].contamination = *c.contamination;
      if (!is_train) specs[i].train_seeds = pools[specs[i].class_id];
    }
  }

  const auto n = static_cast<long long>(specs.size());
  std::vector<std::string> errors(specs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(c))
  for (long long i = 0; i < n; ++i) {
    try {
      save_ply(c.root / manifest.shapes[i].mesh_path, generate_synthetic(specs[i]));
    } catch (const std::exception& ex) {
      errors[i] = manifest.shapes[i].id + ": " + ex.what();
    }
  }
  throw_first(errors);

  manifest.generator = {{"kind", "synthetic"},
                        {"classes", c.classes},
                        {"per_class", c.per_class},
                        {"size_spread", c.size_spread},
                        {"jitter", c.jitter},
                        {"contamination", c.contamination ? json(*c.contamination) : json(nullptr)}};
  save_manifest(c.root, manifest);
  return manifest;
}

Split run_split(const RunConfig& c) {
  const Manifest manifest = load_manifest(c.root);
  Split split = split_dataset(manifest, c.ratios, c.seed);
  save_split(c.root, split);
  return split;
}

GridSet run_materialize(const RunConfig& c) {
  validate_config(c);
  MaterializeOptions options;
  options.frame = c.frame;
  options.resolution = c.resolution;
  options.poses_per_shape = c.poses;
  options.workers = c.workers;
  return materialize(c.root, load_manifest(c.root), options);
}

// ---------------------------------------------------------------- baselines

void fit_cluster(const RunConfig& c) {
  validate_config(c);
  const auto part = load_partition(c);
  const auto high = load_grids(c.root, part->train, worker_count(c));
  const auto low = downsample_all(high, c);
  ClusterFitOptions options;
  options.k = c.k;
  options.seed = derive_seed(c.seed, "kmeans");
  options.max_iters = c.kmeans_iters;
  if (!c.tau_grid.empty()) options.tau_grid = c.tau_grid;
  save_model(model_path(c, "cluster"), build_cluster_model(high, low, options));
}

void fit_retrieval(const RunConfig& c) {
  validate_config(c);
  const auto part = load_partition(c);
  const auto low = downsample_all(load_grids(c.root, part->train, worker_count(c)), c);
  std::vector<std::string> ids;
  for (const auto* r : part->train) ids.push_back(r->item_id);
  const Matrix s = build_similarity_matrix(low, ids);
  save_model(model_path(c, "retrieval"), fit_embedding(s, c.dim, ids), c.low_resolution);
}

void predict(const RunConfig& c) {
  validate_config(c);
  const auto part = load_partition(c);
  const int workers = worker_count(c);
  const auto test_high = load_grids(c.root, part->test, workers);
  const auto train_high = load_grids(c.root, part->train, workers);

  const auto write_all = [&](const std::string& method, const std::vector<const VoxelGrid*>& chosen) {
    for (std::size_t i = 0; i < part->test.size(); ++i) {
      save_vxbg(prediction_path(c, method, part->test[i]->item_id), *chosen[i]);
    }
  };

  for (const auto& method : c.methods) {
    std::vector<const VoxelGrid*> chosen(part->test.size());
    std::vector<VoxelGrid> owned;
    if (method == "cluster") {
      const ClusterModel model = load_cluster_model(model_path(c, "cluster"));
      if (model.high_resolution != c.resolution || model.low_resolution != c.low_resolution) {
        fail("cluster model resolution does not match the configuration; refit");
      }
      for (std::size_t k = 0; k < model.k; ++k) owned.push_back(predict_with_cluster(model, k));
      const NearestCentroidOracle oracle(model);
      for (std::size_t i = 0; i < part->test.size(); ++i) {
        const auto low = downsample(test_high[i], c.resolution / c.low_resolution, c.downsample_frac);
        chosen[i] = &owned[oracle.predict_cluster(low)];
      }
    } else if (method == "retrieval") {
      int low_res = 0;
      const EmbeddingModel model = load_embedding_model(model_path(c, "retrieval"), &low_res);
      if (low_res != c.low_resolution) fail("retrieval model resolution does not match the configuration; refit");
      std::map<std::string, std::size_t> train_index;
      for (std::size_t i = 0; i < part->train.size(); ++i) train_index[part->train[i]->item_id] = i;
      std::vector<std::size_t> order;
      for (const auto& id : model.train_ids) {
        const auto it = train_index.find(id);
        if (it == train_index.end()) fail("retrieval model references unknown training item '" + id + "'; refit");
        order.push_back(it->second);
      }
      std::vector<VoxelGrid> train_low;
      for (std::size_t j : order) {
        train_low.push_back(downsample(train_high[j], c.resolution / c.low_resolution, c.downsample_frac));
      }
      const SimilarityRowOracle oracle(model, train_low);
      for (std::size_t i = 0; i < part->test.size(); ++i) {
        const auto low = downsample(test_high[i], c.resolution / c.low_resolution, c.downsample_frac);
        chosen[i] = &train_high[order[retrieve(model, oracle.predict_descriptor(low), c.similarity)]];
      }
    } else {
      for (std::size_t i = 0; i < part->test.size(); ++i) {
        chosen[i] = &train_high[oracle_nn(test_high[i], train_high).index];
      }
    }
    write_all(method, chosen);
  }
}

// ---------------------------------------------------------------- evaluation

namespace {

struct MethodResult {
  std::vector<ReportEntry> entries;
  std::vector<SkipRecord> skips;
  std::optional<SweepRecord> sweep;
};

}  // namespace

EvalReport evaluate_run(const RunConfig& c) {
  validate_config(c);
  const auto part = load_partition(c);
  const auto& items = part->test;
  const std::size_t n_items = items.size();
  const std::size_t n_methods = c.methods.size();

  std::vector<MethodResult> results(n_items * n_methods);
  std::vector<std::string> errors(n_items);
  const auto n = static_cast<long long>(n_items);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(c))
  for (long long ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const GridRecord& rec = *items[i];
    try {
      const VoxelGrid gt = load_vxbg(c.root / rec.path);
      if (gt.count() == 0) fail("ground truth grid is empty");
      const PointCloud g = sample_surface(marching_cubes(gt), c.metric.sample_count,
                                          derive_seed(c.seed, "sample/gt/" + rec.item_id));
      for (std::size_t m = 0; m < n_methods; ++m) {
        const std::string& method = c.methods[m];
        MethodResult& out = results[i * n_methods + m];
        const auto entry = [&](const std::string& metric, double v) {
          out.entries.push_back({rec.item_id, rec.class_label, method, metric, v});
        };
        const fs::path path = prediction_path(c, method, rec.item_id);
        if (!fs::exists(path)) {
          out.skips.push_back({rec.item_id, rec.class_label, method, "missing prediction"});
          continue;
        }
        const VoxelGrid pred = load_vxbg(path);
        if (pred.resolution() != gt.resolution()) fail("prediction resolution differs from ground truth");
        entry("iou", iou(gt, pred));
        SweepRecord sweep{rec.item_id, rec.class_label, method, {}};
        if (pred.count() == 0) {
          entry("precision", 0.0);
          entry("recall", 0.0);
          entry("fscore", 0.0);
          out.skips.push_back({rec.item_id, rec.class_label, method, "chamfer undefined: empty reconstruction"});
          sweep.fscore.assign(c.sweep.size(), 0.0);
        } else {
          const PointCloud r = sample_surface(marching_cubes(pred), c.metric.sample_count,
                                              derive_seed(c.seed, "sample/" + method + "/" + rec.item_id));
          const auto e_r = point_distances(r, g);
          const auto e_g = point_distances(g, r);
          const PRF prf = prf_from_distances(e_r, e_g, c.metric.d);
          entry("chamfer", chamfer_from_distances(e_r, e_g, c.metric.cd_clamp));
          entry("precision", prf.precision);
          entry("recall", prf.recall);
          entry("fscore", prf.fscore);
          for (double d : c.sweep) sweep.fscore.push_back(prf_from_distances(e_r, e_g, d).fscore);
        }
        out.sweep = std::move(sweep);
      }
    } catch (const std::exception& ex) {
      errors[i] = rec.item_id + ": " + ex.what();
    }
  }
  throw_first(errors);

  EvalReport report;
  report.sweep_thresholds = c.sweep;
  report.config_json = config_snapshot(c).dump();
  for (std::size_t m = 0; m < n_methods; ++m) {
    for (std::size_t i = 0; i < n_items; ++i) {
      auto& r = results[i * n_methods + m];
      report.entries.insert(report.entries.end(), r.entries.begin(), r.entries.end());
      report.skips.insert(report.skips.end(), r.skips.begin(), r.skips.end());
      if (r.sweep) report.sweeps.push_back(std::move(*r.sweep));
    }
  }

  std::uint64_t h = fnv1a64("");
  h = hash_file(c.root / "manifest.json", h);
  h = hash_file(c.root / "split.json", h);
  for (const auto* rec : part->train) h = hash_file(c.root / rec->path, h);
  for (const auto* rec : part->test) h = hash_file(c.root / rec->path, h);
  report.dataset_hash = hex64(h);
  validate_report(report);
  return report;
}

std::map<std::string, std::size_t> class_train_sizes(const RunConfig& c) {
  const Manifest manifest = load_manifest(c.root);
  const Split split = load_split(c.root);
  std::map<std::string, std::string> label;
  for (const auto& s : manifest.shapes) label[s.id] = s.class_label;
  std::map<std::string, std::size_t> sizes;
  for (const auto& id : split.train) {
    const auto it = label.find(id);
    if (it == label.end()) fail("split references unknown shape '" + id + "'");
    ++sizes[it->second];
  }
  return sizes;
}

// ---------------------------------------------------------------- reports

namespace {

struct MetricRange {
  double lo;
  double hi;
};

MetricRange metric_range(const std::string& metric) {
  if (metric == "iou") return {0.0, 1.0};
  return {0.0, 100.0};
}

void require_nonempty(const EvalReport& report) {
  if (report.entries.empty()) fail("report has no entries");
}

void write_json_file(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << j.dump(1) << '\n';
}

}  // namespace

void emit_tables(const EvalReport& report, const fs::path& dir) {
  require_nonempty(report);
  CsvWriter box(dir / "boxplot.csv");
  box.row({"metric", "method", "n", "mean", "median", "q1", "q3", "min", "max", "std"});
  json summary = json::object();
  for (const auto& metric : kMetrics) {
    if (!report.has_metric(metric)) continue;
    std::vector<AggregateTable> tables;
    for (const auto& method : report.methods()) {
      if (report.values(metric, &method).empty()) continue;
      tables.push_back(per_class_aggregate(report, metric, &method));
      const auto& t = tables.back();
      const auto& s = t.overall;
      box.row({metric, method, std::to_string(s.n), csv_number(s.mean), csv_number(s.median), csv_number(s.q1),
               csv_number(s.q3), csv_number(s.min), csv_number(s.max), csv_number(s.std)});
      json classes = json::object();
      for (const auto& cs : t.classes) classes[cs.class_label] = to_json(cs.summary);
      summary[metric][method] = {{"overall", to_json(s)}, {"classes", classes}};
    }
    write_aggregate_csv(dir / ("per_class_" + metric + ".csv"), tables);
  }
  write_json_file(dir / "summary.json", summary);
}

void emit_histograms(const EvalReport& report, const fs::path& dir) {
  require_nonempty(report);
  for (const std::string metric : {"iou", "fscore", "precision", "recall"}) {
    if (!report.has_metric(metric)) continue;
    const auto range = metric_range(metric);
    for (const auto& method : report.methods()) {
      std::vector<std::string> labels;
      std::vector<std::vector<std::size_t>> rows;
      for (const auto& label : report.classes()) {
        const auto v = report.values(metric, &method, &label);
        if (v.empty()) continue;
        labels.push_back(label);
        rows.push_back(histogram(v, 50, range.lo, range.hi));
      }
      if (rows.empty()) continue;
      write_histogram_csv(dir / ("hist_" + metric + "_" + method + ".csv"), labels, rows, range.lo, range.hi);
    }
  }
}

void emit_ks(const EvalReport& report, const fs::path& dir, const RunConfig& c) {
  require_nonempty(report);
  const auto methods = report.methods();
  for (const std::string metric : {"iou", "fscore"}) {
    if (!report.has_metric(metric)) continue;
    KsOptions options;
    options.alpha = c.alpha;
    options.mode = c.ks_mode;
    const auto range = metric_range(metric);
    options.lo = range.lo;
    options.hi = range.hi;
    write_heatmap_csv(dir / ("ks_" + metric + ".csv"), ks_heatmap(report, methods, metric, options));
  }
}

void emit_sweep(const EvalReport& report, const fs::path& dir) {
  require_nonempty(report);
  if (report.sweeps.empty()) fail("report has no F-score sweeps");
  CsvWriter csv(dir / "fscore_sweep.csv");
  csv.row({"method", "class", "d", "n", "mean_fscore"});
  const auto& d = report.sweep_thresholds;
  for (const auto& method : report.methods()) {
    std::map<std::string, std::vector<double>> sums;
    std::map<std::string, std::size_t> counts;
    for (const auto& s : report.sweeps) {
      if (s.method != method) continue;
      for (const std::string& key : {s.class_label, std::string("ALL")}) {
        auto& acc = sums[key];
        acc.resize(d.size(), 0.0);
        for (std::size_t t = 0; t < d.size(); ++t) acc[t] += s.fscore[t];
        ++counts[key];
      }
    }
    for (const auto& [label, acc] : sums) {
      if (label == "ALL") continue;
      for (std::size_t t = 0; t < d.size(); ++t) {
        csv.row({method, label, csv_number(d[t]), std::to_string(counts[label]),
                 csv_number(acc[t] / static_cast<double>(counts[label]))});
      }
    }
    if (sums.count("ALL")) {
      for (std::size_t t = 0; t < d.size(); ++t) {
        csv.row({method, "ALL", csv_number(d[t]), std::to_string(counts["ALL"]),
                 csv_number(sums["ALL"][t] / static_cast<double>(counts["ALL"]))});
      }
    }
  }
}

void emit_cutoff(const EvalReport& report, const fs::path& dir) {
  require_nonempty(report);
  const auto methods = report.methods();
  for (const std::string metric : {"fscore", "precision", "recall"}) {
    if (!report.has_metric(metric)) continue;
    CsvWriter csv(dir / ("cutoff_" + metric + ".csv"));
    std::vector<std::string> header = {"cutoff"};
    std::vector<std::vector<double>> values;
    for (const auto& m : methods) {
      auto v = report.values(metric, &m);
      if (v.empty()) continue;
      header.push_back(m);
      values.push_back(std::move(v));
    }
    csv.row(header);
    for (int cutoff = 0; cutoff <= 100; ++cutoff) {
      std::vector<std::string> row = {std::to_string(cutoff)};
      for (const auto& v : values) row.push_back(csv_number(cutoff_fraction(v, cutoff)));
      csv.row(row);
    }
  }
}

void emit_correlation(const EvalReport& report, const fs::path& dir,
                      const std::map<std::string, std::size_t>& train_sizes) {
  require_nonempty(report);
  CsvWriter csv(dir / "correlation.csv");
  csv.row({"method", "class", "train_size", "miou"});
  json result = json::object();
  for (const auto& method : report.methods()) {
    std::vector<double> x, y;
    for (const auto& label : report.classes()) {
      const auto v = report.values("iou", &method, &label);
      if (v.empty()) continue;
      const auto it = train_sizes.find(label);
      const double size = it == train_sizes.end() ? 0.0 : static_cast<double>(it->second);
      double mean = 0.0;
      for (double e : v) mean += e;
      mean /= static_cast<double>(v.size());
      x.push_back(size);
      y.push_back(mean);
      csv.row({method, label, csv_number(size), csv_number(mean)});
    }
    try {
      result[method] = {{"pearson", pearson(x, y)}, {"classes", x.size()}};
    } catch (const Error& ex) {
      log_warning("correlation for " + method + " undefined: " + ex.what());
      result[method] = {{"pearson", nullptr}, {"classes", x.size()}, {"reason", ex.what()}};
    }
  }
  write_json_file(dir / "correlation.json", result);
}

void emit_reports(const EvalReport& report, const RunConfig& c) {
  const fs::path dir = reports_dir(c);
  emit_tables(report, dir);
  emit_histograms(report, dir);
  emit_ks(report, dir, c);
  emit_sweep(report, dir);
  emit_cutoff(report, dir);
  emit_correlation(report, dir, class_train_sizes(c));
}

std::vector<fs::path> viz_pr(const RunConfig& c, const std::string& method, const std::string& item,
                             const fs::path& dir) {
  validate_config(c);
  const GridSet set = load_grid_set(c.root, c.resolution, c.frame);
  const auto it = std::find_if(set.records.begin(), set.records.end(),
                               [&](const GridRecord& r) { return r.item_id == item; });
  if (it == set.records.end()) fail("unknown item '" + item + "'");
  const fs::path pred_path = prediction_path(c, method, item);
  if (!fs::exists(pred_path)) fail("no " + method + " prediction for '" + item + "'");
  const VoxelGrid gt = load_vxbg(c.root / it->path);
  const VoxelGrid pred = load_vxbg(pred_path);
  if (pred.count() == 0) fail("prediction for '" + item + "' is empty");

  PointCloud g = sample_surface(marching_cubes(gt), c.metric.sample_count, derive_seed(c.seed, "sample/gt/" + item));
  PointCloud r = sample_surface(marching_cubes(pred), c.metric.sample_count,
                                derive_seed(c.seed, "sample/" + method + "/" + item));
  r.scalars = point_distances(r, g);
  g.scalars = point_distances(g, r);

  const auto colors = [&](const PointCloud& cloud) {
    std::vector<Rgb> out;
    out.reserve(cloud.scalars.size());
    for (double e : cloud.scalars) out.push_back(distance_color(e, c.metric.d));
    return out;
  };
  const std::string stem = item + "_" + method;
  const std::vector<fs::path> paths = {dir / (stem + "_precision.ply"), dir / (stem + "_recall.ply"),
                                       dir / (stem + "_precision_dist.ply"), dir / (stem + "_recall_dist.ply")};
  const auto rc = colors(r);
  const auto gc = colors(g);
  save_ply(paths[0], PointCloud{r.points, {}}, PlyFormat::BinaryLittleEndian, &rc);
  save_ply(paths[1], PointCloud{g.points, {}}, PlyFormat::BinaryLittleEndian, &gc);
  save_ply(paths[2], r);
  save_ply(paths[3], g);
  return paths;
}

void run_all(const RunConfig& c) {
  validate_config(c);
  generate_dataset(c);
  run_split(c);
  run_materialize(c);
  const auto uses = [&](const std::string& m) { return std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end(); };
  if (uses("cluster")) fit_cluster(c);
  if (uses("retrieval")) fit_retrieval(c);
  predict(c);
  const EvalReport report = evaluate_run(c);
  save_report(report_path(c), report);
  emit_reports(report, c);
}

}  // namespace rb
