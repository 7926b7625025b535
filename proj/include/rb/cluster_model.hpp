#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rb/kmeans.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

// Clustering baseline: k-means over low-resolution occupancy, then per cluster
// a high-resolution mean shape binarized at the threshold maximizing the
// members' average IoU.
struct ClusterModel {
  std::size_t k = 0;
  int high_resolution = 0;
  int low_resolution = 0;
  Centroids centroids;              // k x low^3
  std::vector<RealGrid> mean_shapes;  // k x high^3, cells in [0, 1]
  std::vector<float> thresholds;
  std::vector<std::size_t> member_counts;
};

// {0.05, 0.10, ..., 0.50}
std::vector<float> default_tau_grid();

// Per-cell average occupancy.
RealGrid mean_shape(std::span<const VoxelGrid> members);

struct ThresholdChoice {
  float tau = 0.0f;
  double mean_iou = 0.0;
  // Every candidate threshold produced an empty shape.
  bool all_empty = false;
};

// argmax over grid of the average IoU(mean > tau, member); the first (smallest)
// tau wins ties. Scans the grid in the given order, which should ascend.
ThresholdChoice optimal_threshold(const RealGrid& mean, std::span<const VoxelGrid> members,
                                  std::span<const float> grid);

struct ClusterFitOptions {
  std::size_t k = 16;
  std::uint64_t seed = 0;
  int max_iters = 100;
  std::vector<float> tau_grid = default_tau_grid();
};

ClusterModel build_cluster_model(std::span<const VoxelGrid> train_high, std::span<const VoxelGrid> train_low,
                                 const ClusterFitOptions& options);

// Binarized mean shape of cluster id.
VoxelGrid predict_with_cluster(const ClusterModel& model, std::size_t cluster_id);

}  // namespace rb
