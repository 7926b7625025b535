#include "rb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <omp.h>

#include "rb/error.hpp"
#include "rb/geometry.hpp"
#include "rb/io.hpp"
#include "rb/random.hpp"
#include "rb/voxelize.hpp"

namespace rb {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    fail(path.string() + ": " + ex.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << j.dump(1) << '\n';
}

}  // namespace

void save_manifest(const std::filesystem::path& root, const Manifest& manifest) {
  json shapes = json::array();
  for (const auto& s : manifest.shapes) shapes.push_back({{"id", s.id}, {"class", s.class_label}, {"mesh", s.mesh_path}});
  write_json(root / "manifest.json",
             {{"seed", manifest.seed}, {"classes", manifest.classes}, {"shapes", shapes}, {"generator", manifest.generator}});
}

Manifest load_manifest(const std::filesystem::path& root) {
  const json j = read_json(root / "manifest.json");
  Manifest m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.classes = j.at("classes").get<std::vector<std::string>>();
    for (const auto& s : j.at("shapes")) {
      m.shapes.push_back({s.at("id").get<std::string>(), s.at("class").get<std::string>(), s.at("mesh").get<std::string>()});
    }
    if (j.contains("generator")) m.generator = j.at("generator");
  } catch (const json::exception& ex) {
    fail(std::string("malformed manifest: ") + ex.what());
  }
  std::vector<std::string> ids;
  for (const auto& s : m.shapes) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) fail("manifest shape ids are not unique");
  return m;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, SplitRatios ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * ratios[i];
    // Guard against 0.7 * 10 landing just under 7.
    const double whole = std::floor(exact + 1e-9);
    sizes[i] = static_cast<std::size_t>(whole);
    remainder[i] = exact - whole;
    assigned += sizes[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainder[i] > remainder[best] + 1e-12) best = i;
    }
    ++sizes[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return sizes;
}

Split split_dataset(const Manifest& manifest, SplitRatios ratios, std::uint64_t seed) {
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) fail("split ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) fail("split ratios must sum to 1");

  std::map<std::string, std::vector<std::string>> by_class;
  for (const auto& s : manifest.shapes) by_class[s.class_label].push_back(s.id);

  Split split;
  for (auto& [label, ids] : by_class) {
    if (ids.size() < 3) {
      log_warning("class '" + label + "' has fewer than 3 shapes; all assigned to train");
      split.train.insert(split.train.end(), ids.begin(), ids.end());
      continue;
    }
    Rng rng(derive_seed(seed, "split/" + label));
    shuffle(ids, rng);
    const auto sizes = split_sizes(ids.size(), ratios);
    auto it = ids.begin();
    split.train.insert(split.train.end(), it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    split.val.insert(split.val.end(), it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    split.test.insert(split.test.end(), it, ids.end());
  }
  return split;
}

void save_split(const std::filesystem::path& root, const Split& split) {
  write_json(root / "split.json", {{"train", split.train}, {"val", split.val}, {"test", split.test}});
}

Split load_split(const std::filesystem::path& root) {
  const json j = read_json(root / "split.json");
  try {
    return {j.at("train").get<std::vector<std::string>>(), j.at("val").get<std::vector<std::string>>(),
            j.at("test").get<std::vector<std::string>>()};
  } catch (const json::exception& ex) {
    fail(std::string("malformed split: ") + ex.what());
  }
}

std::string frame_name(Frame frame) { return frame == Frame::Object ? "object" : "viewer"; }

Frame parse_frame(const std::string& name) {
  if (name == "object") return Frame::Object;
  if (name == "viewer") return Frame::Viewer;
  fail_usage("unknown frame '" + name + "' (expected object or viewer)");
}

std::vector<Pose> sample_poses(std::uint64_t seed, const std::string& shape_id, int count) {
  Rng rng(derive_seed(seed, "pose/" + shape_id));
  std::vector<Pose> poses;
  for (int i = 0; i < count; ++i) {
    const double azimuth = 360.0 * uniform01(rng);
    const double elevation = 50.0 * uniform01(rng);
    poses.push_back({azimuth, elevation});
  }
  return poses;
}

VoxelGrid materialize_grid(const TriangleMesh& mesh, int resolution, const std::optional<Pose>& pose) {
  const TriangleMesh placed = pose ? rotate_mesh(mesh, *pose) : normalize_unit_cube(mesh);
  return voxelize_mesh(placed, resolution, true);
}

namespace {

json record_json(const GridRecord& r) {
  return {{"item", r.item_id},     {"shape", r.shape_id},           {"class", r.class_label},
          {"pose", r.pose_index},  {"azimuth", r.pose.azimuth},     {"elevation", r.pose.elevation},
          {"path", r.path}};
}

GridSet set_from_json(const json& j) {
  GridSet s;
  s.resolution = j.at("resolution").get<int>();
  s.frame = parse_frame(j.at("frame").get<std::string>());
  s.poses_per_shape = j.at("poses_per_shape").get<int>();
  for (const auto& e : j.at("entries")) {
    GridRecord r;
    r.item_id = e.at("item").get<std::string>();
    r.shape_id = e.at("shape").get<std::string>();
    r.class_label = e.at("class").get<std::string>();
    r.pose_index = e.at("pose").get<int>();
    r.pose = {e.at("azimuth").get<double>(), e.at("elevation").get<double>()};
    r.path = e.at("path").get<std::string>();
    s.records.push_back(std::move(r));
  }
  return s;
}

}  // namespace

GridSet materialize(const std::filesystem::path& root, const Manifest& manifest, const MaterializeOptions& options) {
  if (options.frame == Frame::Viewer && options.poses_per_shape < 1) fail("viewer frame needs at least one pose per shape");
  GridSet set;
  set.resolution = options.resolution;
  set.frame = options.frame;
  set.poses_per_shape = options.frame == Frame::Object ? 1 : options.poses_per_shape;
  const std::string dir = "grids/" + std::to_string(options.resolution) + "/" + frame_name(options.frame) + "/";

  const auto n = static_cast<long long>(manifest.shapes.size());
  std::vector<std::vector<GridRecord>> per_shape(manifest.shapes.size());
  std::vector<std::string> errors(manifest.shapes.size());
  const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < n; ++i) {
    const auto& shape = manifest.shapes[i];
    try {
      const TriangleMesh mesh = load_ply_mesh(root / shape.mesh_path);
      if (options.frame == Frame::Object) {
        GridRecord r{shape.id, shape.id, shape.class_label, -1, {}, dir + shape.id + ".vxbg"};
        save_vxbg(root / r.path, materialize_grid(mesh, options.resolution, std::nullopt));
        per_shape[i].push_back(std::move(r));
      } else {
        const auto poses = sample_poses(manifest.seed, shape.id, options.poses_per_shape);
        for (int p = 0; p < options.poses_per_shape; ++p) {
          const std::string item = shape.id + "_" + std::to_string(p);
          GridRecord r{item, shape.id, shape.class_label, p, poses[p], dir + item + ".vxbg"};
          save_vxbg(root / r.path, materialize_grid(mesh, options.resolution, poses[p]));
          per_shape[i].push_back(std::move(r));
        }
      }
    } catch (const std::exception& ex) {
      errors[i] = shape.id + ": " + ex.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) fail("materialize failed for " + e);
  }
  for (auto& records : per_shape) {
    for (auto& r : records) set.records.push_back(std::move(r));
  }

  // Index update happens once, after every worker has finished.
  json index = std::filesystem::exists(root / "index.json") ? read_json(root / "index.json") : json::object();
  json sets = json::array();
  if (index.contains("sets")) {
    for (const auto& s : index.at("sets")) {
      if (s.at("resolution").get<int>() == set.resolution && s.at("frame").get<std::string>() == frame_name(set.frame)) {
        continue;
      }
      sets.push_back(s);
    }
  }
  json entries = json::array();
  for (const auto& r : set.records) entries.push_back(record_json(r));
  sets.push_back({{"resolution", set.resolution},
                  {"frame", frame_name(set.frame)},
                  {"poses_per_shape", set.poses_per_shape},
                  {"entries", entries}});
  write_json(root / "index.json", {{"sets", sets}});
  return set;
}

GridSet load_grid_set(const std::filesystem::path& root, int resolution, Frame frame) {
  const json index = read_json(root / "index.json");
  try {
    for (const auto& s : index.at("sets")) {
      if (s.at("resolution").get<int>() == resolution && s.at("frame").get<std::string>() == frame_name(frame)) {
        return set_from_json(s);
      }
    }
  } catch (const json::exception& ex) {
    fail(std::string("malformed index: ") + ex.what());
  }
  fail("no " + frame_name(frame) + "-frame grids at resolution " + std::to_string(resolution) +
       " in " + (root / "index.json").string() + "; run materialize first");
}

}  // namespace rb
