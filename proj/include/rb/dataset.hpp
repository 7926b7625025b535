#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

struct ManifestShape {
  std::string id;
  std::string class_label;
  std::string mesh_path;  // relative to the dataset root
};

struct Manifest {
  std::vector<ManifestShape> shapes;
  std::vector<std::string> classes;
  std::uint64_t seed = 0;
  nlohmann::json generator = nlohmann::json::object();  // provenance of synthetic data
};

void save_manifest(const std::filesystem::path& root, const Manifest& manifest);
Manifest load_manifest(const std::filesystem::path& root);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

using SplitRatios = std::array<double, 3>;
inline constexpr SplitRatios kDefaultRatios = {0.7, 0.1, 0.2};

// Per class: seeded shuffle, then proportional cuts with largest-remainder
// rounding. Classes with fewer than 3 shapes go entirely to train.
Split split_dataset(const Manifest& manifest, SplitRatios ratios, std::uint64_t seed);

// Per-class sizes (train, val, test) for n shapes under largest-remainder rounding.
std::array<std::size_t, 3> split_sizes(std::size_t n, SplitRatios ratios);

void save_split(const std::filesystem::path& root, const Split& split);
Split load_split(const std::filesystem::path& root);

enum class Frame { Object, Viewer };
std::string frame_name(Frame frame);
Frame parse_frame(const std::string& name);

// One voxelized ground-truth item: a shape (object frame) or a shape seen from
// one pose (viewer frame).
struct GridRecord {
  std::string item_id;
  std::string shape_id;
  std::string class_label;
  int pose_index = -1;  // -1 in the object frame
  Pose pose;
  std::string path;  // relative to the dataset root
};

struct GridSet {
  int resolution = 0;
  Frame frame = Frame::Object;
  int poses_per_shape = 1;
  std::vector<GridRecord> records;
};

// Poses for a shape, drawn from a stream keyed by (seed, shape id).
std::vector<Pose> sample_poses(std::uint64_t seed, const std::string& shape_id, int count);

// Object frame: voxelize(normalize(mesh)). With a pose: voxelize(rotate(mesh)).
VoxelGrid materialize_grid(const TriangleMesh& mesh, int resolution, const std::optional<Pose>& pose);

struct MaterializeOptions {
  Frame frame = Frame::Object;
  int resolution = 128;
  int poses_per_shape = 5;
  int workers = 0;  // 0 = OpenMP default
};

// Writes <root>/grids/<res>/<frame>/<item>.vxbg for every shape and records the
// set in <root>/index.json (replacing an earlier set of the same res/frame).
GridSet materialize(const std::filesystem::path& root, const Manifest& manifest, const MaterializeOptions& options);

GridSet load_grid_set(const std::filesystem::path& root, int resolution, Frame frame);

}  // namespace rb
