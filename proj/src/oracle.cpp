#include "rb/oracle.hpp"

#include <cmath>
#include <limits>

#include "rb/error.hpp"
#include "rb/metrics.hpp"

namespace rb {

NearestNeighbor oracle_nn(const VoxelGrid& test, std::span<const VoxelGrid> train) {
  if (train.empty()) fail("oracle nearest neighbour needs a non-empty training set");
  for (const auto& t : train) {
    if (t.resolution() != test.resolution()) fail("oracle nearest neighbour: resolution mismatch");
  }
  // iou() throws, which must not escape the parallel region; both-empty pairs
  // are flagged as NaN and reported afterwards.
  std::vector<double> scores(train.size());
  const auto n = static_cast<long long>(train.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const std::size_t uni = union_count(test, train[i]);
    scores[i] = uni == 0 ? std::numeric_limits<double>::quiet_NaN()
                         : static_cast<double>(intersection_count(test, train[i])) / static_cast<double>(uni);
  }
  for (double s : scores) {
    if (std::isnan(s)) fail("IoU undefined: both grids are empty");
  }
  NearestNeighbor best{0, scores[0]};
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best.iou) best = {i, scores[i]};
  }
  return best;
}

std::size_t NearestCentroidOracle::predict_cluster(const VoxelGrid& low) const {
  if (low.resolution() != model_.low_resolution) fail("query resolution does not match the cluster model");
  return nearest_centroid(low.flatten(), model_.centroids);
}

std::vector<double> SimilarityRowOracle::predict_descriptor(const VoxelGrid& low) const {
  return embed_row(model_, similarity_row(low, train_low_));
}

}  // namespace rb
