#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rb/io.hpp"
#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

struct MetricConfig {
  // Distance threshold as a fraction of the volume side length.
  double d = 0.01;
  std::size_t sample_count = 10000;
  // Caps each nearest-neighbour distance in the Chamfer sum when set.
  std::optional<double> cd_clamp;
};

// Percentages in [0, 100].
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  // Set when the reconstruction had no points; precision is then reported as 0.
  bool empty_reconstruction = false;
};

// |a AND b| / |a OR b|. Throws on resolution mismatch or when both are empty.
double iou(const VoxelGrid& a, const VoxelGrid& b);

// Exact nearest-neighbour distance from every point of `from` into `to`,
// via a k-d tree over `to`; queries run in parallel.
std::vector<double> point_distances(const PointCloud& from, const PointCloud& to);

double chamfer(const PointCloud& g, const PointCloud& r, std::optional<double> clamp = std::nullopt);

// g is ground truth, r the reconstruction. Counts use strict e < d.
double chamfer_from_distances(std::span<const double> e_r, std::span<const double> e_g,
                              std::optional<double> clamp = std::nullopt);

PRF precision_recall_f(const PointCloud& g, const PointCloud& r, double d);

// Same counts from precomputed directed distances (e_r: r->g, e_g: g->r).
PRF prf_from_distances(std::span<const double> e_r, std::span<const double> e_g, double d);

struct SweepPoint {
  double d = 0.0;
  PRF prf;
};

// One distance pass reused for every threshold; thresholds must ascend.
std::vector<SweepPoint> fscore_sweep(const PointCloud& g, const PointCloud& r,
                                     std::span<const double> thresholds);

// Linear two-colour ramp: distance 0 maps to kNearColor, 2*d and beyond to kFarColor.
inline constexpr Rgb kNearColor = {255, 221, 0};
inline constexpr Rgb kFarColor = {38, 38, 140};
Rgb distance_color(double distance, double d);

}  // namespace rb
