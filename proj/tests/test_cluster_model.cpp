#include <gtest/gtest.h>

#include <sstream>

#include "rb/cluster_model.hpp"
#include "rb/error.hpp"
#include "rb/model_io.hpp"
#include "rb/voxelize.hpp"
#include "test_util.hpp"

namespace {

// Exhaustive threshold search coded without the library: strict >, first best wins.
float exhaustive_tau(const std::vector<double>& mean, const std::vector<rb::VoxelGrid>& members,
                     const std::vector<float>& grid) {
  float best_tau = grid.front();
  double best = -1.0;
  for (float tau : grid) {
    double total = 0.0;
    for (const auto& m : members) {
      std::size_t inter = 0, uni = 0;
      for (std::size_t i = 0; i < mean.size(); ++i) {
        const bool p = static_cast<float>(mean[i]) > tau;
        const bool q = m.get(i);
        inter += p && q;
        uni += p || q;
      }
      total += uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
    }
    const double avg = total / members.size();
    if (avg > best) {
      best = avg;
      best_tau = tau;
    }
  }
  return best_tau;
}

std::vector<double> naive_mean(const std::vector<rb::VoxelGrid>& members) {
  std::vector<double> mean(members[0].cell_count(), 0.0);
  for (const auto& m : members)
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += m.get(i);
  for (auto& v : mean) v /= members.size();
  return mean;
}

}  // namespace

TEST(MeanShape, WorkedExamples) {
  rb::VoxelGrid a(2), ab(2);
  a.set(0);
  ab.set(0);
  ab.set(1);
  const std::vector<rb::VoxelGrid> single = {ab};
  const auto m1 = rb::mean_shape(single);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(m1.values[i], ab.get(i) ? 1.0f : 0.0f);
  const std::vector<rb::VoxelGrid> pair = {a, ab};
  const auto m2 = rb::mean_shape(pair);
  EXPECT_EQ(m2.values[0], 1.0f);
  EXPECT_EQ(m2.values[1], 0.5f);
  EXPECT_EQ(m2.values[2], 0.0f);
}

TEST(MeanShape, MatchesNaiveSummation) {
  std::mt19937_64 rng(1);
  std::vector<rb::VoxelGrid> members;
  for (int i = 0; i < 10; ++i) members.push_back(testutil::random_grid(8, 0.4, rng));
  const auto m = rb::mean_shape(members);
  const auto naive = naive_mean(members);
  for (std::size_t i = 0; i < naive.size(); ++i) EXPECT_EQ(m.values[i], static_cast<float>(naive[i]));
  EXPECT_THROW(rb::mean_shape(std::vector<rb::VoxelGrid>{}), rb::Error);
  members.push_back(rb::VoxelGrid(4));
  EXPECT_THROW(rb::mean_shape(members), rb::Error);
}

TEST(OptimalThreshold, DefaultGrid) {
  const auto grid = rb::default_tau_grid();
  ASSERT_EQ(grid.size(), 10u);
  EXPECT_FLOAT_EQ(grid.front(), 0.05f);
  EXPECT_FLOAT_EQ(grid.back(), 0.5f);
}

TEST(OptimalThreshold, SingleMemberTiesToSmallestTau) {
  std::mt19937_64 rng(2);
  const std::vector<rb::VoxelGrid> members = {testutil::random_blobs(8, rng)};
  const auto choice = rb::optimal_threshold(rb::mean_shape(members), members, rb::default_tau_grid());
  EXPECT_FLOAT_EQ(choice.tau, 0.05f);
  EXPECT_EQ(choice.mean_iou, 1.0);
}

TEST(OptimalThreshold, TwoMemberWorkedExample) {
  rb::VoxelGrid a(2), ab(2);
  a.set(0);
  ab.set(0);
  ab.set(1);
  const std::vector<rb::VoxelGrid> members = {a, ab};
  const auto choice = rb::optimal_threshold(rb::mean_shape(members), members, rb::default_tau_grid());
  EXPECT_FLOAT_EQ(choice.tau, 0.05f);
  EXPECT_DOUBLE_EQ(choice.mean_iou, 0.75);
  rb::ClusterModel model;
  model.k = 1;
  model.high_resolution = 2;
  model.low_resolution = 2;
  model.centroids = {std::vector<double>(8, 0.0)};
  model.mean_shapes = {rb::mean_shape(members)};
  model.thresholds = {choice.tau};
  model.member_counts = {2};
  EXPECT_EQ(rb::predict_with_cluster(model, 0), ab);
  EXPECT_THROW(rb::predict_with_cluster(model, 1), rb::Error);
}

TEST(OptimalThreshold, EqualsExhaustiveSearch) {
  std::mt19937_64 rng(3);
  const auto grid = rb::default_tau_grid();
  for (int t = 0; t < 50; ++t) {
    std::vector<rb::VoxelGrid> members;
    for (int i = 0; i < 5; ++i) members.push_back(testutil::random_grid(6, 0.3 + 0.1 * i, rng));
    const auto choice = rb::optimal_threshold(rb::mean_shape(members), members, grid);
    EXPECT_EQ(choice.tau, exhaustive_tau(naive_mean(members), members, grid));
  }
}

TEST(OptimalThreshold, AllEmptyFlagged) {
  // Ten members, one cell each: mean 0.1 per cell lies below most of the grid.
  std::vector<rb::VoxelGrid> members;
  for (int i = 0; i < 10; ++i) {
    rb::VoxelGrid g(4);
    g.set(static_cast<std::size_t>(i));
    members.push_back(g);
  }
  const std::vector<float> high = {0.5f, 0.6f};
  const auto choice = rb::optimal_threshold(rb::mean_shape(members), members, high);
  EXPECT_TRUE(choice.all_empty);
  EXPECT_EQ(choice.tau, 0.5f);
  EXPECT_THROW(rb::optimal_threshold(rb::mean_shape(members), members, std::vector<float>{}), rb::Error);
}

TEST(ClusterModel, IdenticalShapesSingleCluster) {
  std::mt19937_64 rng(4);
  const auto shape = testutil::random_blobs(16, rng);
  const std::vector<rb::VoxelGrid> high(6, shape);
  std::vector<rb::VoxelGrid> low;
  for (const auto& g : high) low.push_back(rb::downsample(g, 2, 0.5));
  rb::ClusterFitOptions options;
  options.k = 1;
  const auto model = rb::build_cluster_model(high, low, options);
  EXPECT_EQ(model.member_counts, std::vector<std::size_t>{6});
  EXPECT_EQ(rb::predict_with_cluster(model, 0), shape);
}

TEST(ClusterModel, SeparatesDisjointFamilies) {
  std::vector<rb::VoxelGrid> high, low;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> wiggle(0, 1);
  for (int i = 0; i < 12; ++i) {
    rb::VoxelGrid g(16);
    const int family = i % 2;
    const int off = family ? 9 : 1;
    const int grow = wiggle(rng);
    for (int z = off; z < off + 5 + grow; ++z)
      for (int y = off; y < off + 5; ++y)
        for (int x = off; x < off + 5; ++x) g.set(x, y, z);
    high.push_back(g);
    low.push_back(rb::downsample(g, 2, 0.5));
  }
  rb::ClusterFitOptions options;
  options.k = 2;
  options.seed = 3;
  const auto model = rb::build_cluster_model(high, low, options);
  EXPECT_EQ(model.member_counts[0] + model.member_counts[1], 12u);
  EXPECT_EQ(model.member_counts[0], 6u);
  for (std::size_t c = 0; c < 2; ++c) {
    // Members of the cluster are the family whose block contains the mean's support.
    std::vector<rb::VoxelGrid> family;
    const bool upper = model.mean_shapes[c].at(10, 10, 10) > 0.0f;
    for (int i = 0; i < 12; ++i) {
      if ((i % 2 == 1) == upper) family.push_back(high[i]);
    }
    const auto naive = naive_mean(family);
    for (std::size_t j = 0; j < naive.size(); ++j) EXPECT_EQ(model.mean_shapes[c].values[j], static_cast<float>(naive[j]));
  }
}

TEST(ClusterModel, SingletonClusterReproducesMember) {
  std::mt19937_64 rng(6);
  std::vector<rb::VoxelGrid> high, low;
  for (int i = 0; i < 5; ++i) {
    high.push_back(testutil::random_blobs(16, rng));
    low.push_back(rb::downsample(high.back(), 2, 0.5));
  }
  rb::ClusterFitOptions options;
  options.k = 5;
  const auto model = rb::build_cluster_model(high, low, options);
  for (std::size_t c = 0; c < 5; ++c) {
    ASSERT_EQ(model.member_counts[c], 1u);
    const auto pred = rb::predict_with_cluster(model, c);
    EXPECT_TRUE(std::find(high.begin(), high.end(), pred) != high.end());
  }
}

TEST(ModelIo, ClusterRoundTrip) {
  std::mt19937_64 rng(7);
  std::vector<rb::VoxelGrid> high, low;
  for (int i = 0; i < 9; ++i) {
    high.push_back(testutil::random_blobs(16, rng));
    low.push_back(rb::downsample(high.back(), 4, 0.5));
  }
  rb::ClusterFitOptions options;
  options.k = 3;
  const auto model = rb::build_cluster_model(high, low, options);
  std::stringstream ss;
  rb::write_model(ss, model);
  EXPECT_EQ(ss.str().substr(0, 4), "RBMD");
  EXPECT_EQ(rb::peek_model_kind(ss), rb::ModelKind::Cluster);
  ss.seekg(0);
  const auto back = rb::read_cluster_model(ss);
  EXPECT_EQ(back.k, model.k);
  EXPECT_EQ(back.high_resolution, 16);
  EXPECT_EQ(back.low_resolution, 4);
  EXPECT_EQ(back.thresholds, model.thresholds);
  EXPECT_EQ(back.member_counts, model.member_counts);
  for (std::size_t c = 0; c < model.k; ++c) {
    EXPECT_EQ(back.mean_shapes[c].values, model.mean_shapes[c].values);
    EXPECT_EQ(rb::predict_with_cluster(back, c), rb::predict_with_cluster(model, c));
    for (std::size_t j = 0; j < model.centroids[c].size(); ++j) {
      EXPECT_EQ(back.centroids[c][j], static_cast<double>(static_cast<float>(model.centroids[c][j])));
    }
  }
  std::stringstream wrong;
  rb::write_model(wrong, model);
  EXPECT_THROW(rb::read_embedding_model(wrong), rb::Error);
  std::stringstream garbage("RBXX");
  EXPECT_THROW(rb::read_cluster_model(garbage), rb::Error);
}
