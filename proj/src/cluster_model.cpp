#include "rb/cluster_model.hpp"

#include <string>

#include "rb/error.hpp"

namespace rb {

namespace {

// Members are shapes, so an empty prediction against an empty member only
// arises for degenerate data; count it as a perfect match.
double member_iou(const VoxelGrid& prediction, const VoxelGrid& member) {
  const std::size_t uni = union_count(prediction, member);
  if (uni == 0) return 1.0;
  return static_cast<double>(intersection_count(prediction, member)) / static_cast<double>(uni);
}

}  // namespace

std::vector<float> default_tau_grid() {
  std::vector<float> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(static_cast<float>(0.05 * i));
  return grid;
}

RealGrid mean_shape(std::span<const VoxelGrid> members) {
  if (members.empty()) fail("mean shape of an empty cluster");
  const int res = members.front().resolution();
  std::vector<std::uint32_t> counts(members.front().cell_count(), 0);
  for (const auto& m : members) {
    if (m.resolution() != res) fail("cluster members differ in resolution");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += m.get(i);
  }
  RealGrid mean{res, std::vector<float>(counts.size())};
  const auto n = static_cast<double>(members.size());
  for (std::size_t i = 0; i < counts.size(); ++i) mean.values[i] = static_cast<float>(counts[i] / n);
  return mean;
}

ThresholdChoice optimal_threshold(const RealGrid& mean, std::span<const VoxelGrid> members,
                                  std::span<const float> grid) {
  if (grid.empty()) fail("empty threshold grid");
  if (members.empty()) fail("threshold search over an empty cluster");
  ThresholdChoice best{grid.front(), -1.0, true};
  for (float tau : grid) {
    const VoxelGrid shape = threshold(mean, tau);
    if (!shape.empty()) best.all_empty = false;
    double sum = 0.0;
    for (const auto& m : members) sum += member_iou(shape, m);
    const double avg = sum / static_cast<double>(members.size());
    if (avg > best.mean_iou) {
      best.tau = tau;
      best.mean_iou = avg;
    }
  }
  return best;
}

ClusterModel build_cluster_model(std::span<const VoxelGrid> train_high, std::span<const VoxelGrid> train_low,
                                 const ClusterFitOptions& options) {
  if (train_high.size() != train_low.size()) fail("high- and low-resolution training lists differ in length");
  if (train_high.empty()) fail("empty training set");

  std::vector<std::vector<float>> features;
  features.reserve(train_low.size());
  for (const auto& g : train_low) features.push_back(g.flatten());
  const KMeansResult km = kmeans(features, options.k, options.seed, options.max_iters);

  ClusterModel model;
  model.k = options.k;
  model.high_resolution = train_high.front().resolution();
  model.low_resolution = train_low.front().resolution();
  model.centroids = km.centroids;
  std::vector<std::vector<VoxelGrid>> members(options.k);
  for (std::size_t i = 0; i < train_high.size(); ++i) members[km.assignments[i]].push_back(train_high[i]);
  for (std::size_t c = 0; c < options.k; ++c) {
    if (members[c].empty()) fail_invariant("cluster " + std::to_string(c) + " has no members");
    RealGrid mean = mean_shape(members[c]);
    const ThresholdChoice choice = optimal_threshold(mean, members[c], options.tau_grid);
    if (choice.all_empty) log_warning("cluster " + std::to_string(c) + ": mean shape empty at every threshold");
    model.mean_shapes.push_back(std::move(mean));
    model.thresholds.push_back(choice.tau);
    model.member_counts.push_back(members[c].size());
  }
  return model;
}

VoxelGrid predict_with_cluster(const ClusterModel& model, std::size_t cluster_id) {
  if (cluster_id >= model.k) {
    fail("cluster id " + std::to_string(cluster_id) + " out of range (k = " + std::to_string(model.k) + ")");
  }
  return threshold(model.mean_shapes[cluster_id], model.thresholds[cluster_id]);
}

}  // namespace rb
