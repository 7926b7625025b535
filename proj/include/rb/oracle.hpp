#pragma once

#include <span>
#include <vector>

#include "rb/cluster_model.hpp"
#include "rb/embedding.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

struct NearestNeighbor {
  std::size_t index = 0;
  double iou = 0.0;
};

// Training shape with the highest IoU to test; ties to the lowest index.
NearestNeighbor oracle_nn(const VoxelGrid& test, std::span<const VoxelGrid> train);

// Stand-ins for the image classifier / regressor. Input is the test item's
// low-resolution ground-truth shape; a real predictor would see an image.
class ClusterPredictor {
 public:
  virtual ~ClusterPredictor() = default;
  virtual std::size_t predict_cluster(const VoxelGrid& low) const = 0;
};

class DescriptorPredictor {
 public:
  virtual ~DescriptorPredictor() = default;
  virtual std::vector<double> predict_descriptor(const VoxelGrid& low) const = 0;
};

// Perfect classifier: the cluster whose centroid is nearest.
class NearestCentroidOracle final : public ClusterPredictor {
 public:
  explicit NearestCentroidOracle(const ClusterModel& model) : model_(model) {}
  std::size_t predict_cluster(const VoxelGrid& low) const override;

 private:
  const ClusterModel& model_;
};

// Perfect regressor: the embedding of the item's true similarity row.
class SimilarityRowOracle final : public DescriptorPredictor {
 public:
  SimilarityRowOracle(const EmbeddingModel& model, std::span<const VoxelGrid> train_low)
      : model_(model), train_low_(train_low) {}
  std::vector<double> predict_descriptor(const VoxelGrid& low) const override;

 private:
  const EmbeddingModel& model_;
  std::span<const VoxelGrid> train_low_;
};

}  // namespace rb
