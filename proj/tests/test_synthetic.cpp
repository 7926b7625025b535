#include <gtest/gtest.h>

#include "rb/error.hpp"
#include "rb/geometry.hpp"
#include "rb/metrics.hpp"
#include "rb/oracle.hpp"
#include "rb/synthetic.hpp"
#include "rb/voxelize.hpp"
#include "test_util.hpp"

TEST(Synthetic, SameSpecSameMesh) {
  for (const auto recipe : rb::kAllRecipes) {
    rb::ShapeSpec spec;
    spec.recipe = recipe;
    spec.seed = 1234;
    EXPECT_EQ(rb::generate_synthetic(spec), rb::generate_synthetic(spec));
  }
}

TEST(Synthetic, ZeroJitterMakesIdenticalInstances) {
  for (const auto recipe : rb::kAllRecipes) {
    rb::ShapeSpec a, b;
    a.recipe = b.recipe = recipe;
    a.jitter = b.jitter = 0.0;
    a.seed = 1;
    b.seed = 2;
    EXPECT_EQ(rb::generate_synthetic(a), rb::generate_synthetic(b)) << rb::recipe_name(recipe);
  }
}

TEST(Synthetic, InstancesShareTopologyAndDifferByJitter) {
  for (const auto recipe : rb::kAllRecipes) {
    rb::ShapeSpec a, b;
    a.recipe = b.recipe = recipe;
    a.seed = 1;
    b.seed = 2;
    const auto ma = rb::generate_synthetic(a);
    const auto mb = rb::generate_synthetic(b);
    EXPECT_EQ(ma.triangles, mb.triangles);
    EXPECT_NE(ma.vertices, mb.vertices);
  }
}

TEST(Synthetic, ShapesAreFiniteClosedAndOutward) {
  for (const auto recipe : rb::kAllRecipes) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      rb::ShapeSpec spec;
      spec.recipe = recipe;
      spec.seed = seed;
      spec.jitter = 0.9;
      const auto m = rb::generate_synthetic(spec);
      for (const auto& v : m.vertices)
        for (int k = 0; k < 3; ++k) EXPECT_TRUE(std::isfinite(v[k]));
      EXPECT_TRUE(testutil::is_closed_oriented(m));
      EXPECT_GT(rb::signed_volume(m), 0.0);
    }
  }
}

TEST(Synthetic, RecipeNamesRoundTrip) {
  for (const auto recipe : rb::kAllRecipes) EXPECT_EQ(rb::parse_recipe(rb::recipe_name(recipe)), recipe);
  EXPECT_FALSE(rb::parse_recipe("teapot").has_value());
}

TEST(Synthetic, ParameterValidation) {
  rb::ShapeSpec spec;
  spec.jitter = 0.95;
  EXPECT_THROW(rb::generate_synthetic(spec), rb::Error);
  spec.jitter = 0.3;
  spec.contamination = 1.5;
  EXPECT_THROW(rb::generate_synthetic(spec), rb::Error);
  spec.contamination = 1.0;
  spec.role = rb::SplitRole::Test;
  EXPECT_THROW(rb::generate_synthetic(spec), rb::Error);  // no training pool
}

TEST(Synthetic, FullContaminationCopiesTrainingShapes) {
  std::vector<std::uint64_t> pool = {11, 12, 13, 14};
  std::vector<rb::VoxelGrid> train;
  for (auto seed : pool) {
    rb::ShapeSpec spec;
    spec.recipe = rb::Recipe::Table;
    spec.seed = seed;
    spec.role = rb::SplitRole::Train;
    train.push_back(rb::voxelize_mesh(rb::normalize_unit_cube(rb::generate_synthetic(spec)), 32, true));
  }
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    rb::ShapeSpec spec;
    spec.recipe = rb::Recipe::Table;
    spec.seed = seed;
    spec.role = rb::SplitRole::Test;
    spec.contamination = 1.0;
    spec.train_seeds = pool;
    const auto g = rb::voxelize_mesh(rb::normalize_unit_cube(rb::generate_synthetic(spec)), 32, true);
    EXPECT_EQ(rb::oracle_nn(g, train).iou, 1.0);
  }
}

TEST(Synthetic, DisjointRolesDoNotCoincide) {
  rb::ShapeSpec tr, te;
  tr.recipe = te.recipe = rb::Recipe::Box;
  tr.seed = te.seed = 5;
  tr.role = rb::SplitRole::Train;
  te.role = rb::SplitRole::Test;
  const auto a = rb::voxelize_mesh(rb::normalize_unit_cube(rb::generate_synthetic(tr)), 32, true);
  const auto b = rb::voxelize_mesh(rb::normalize_unit_cube(rb::generate_synthetic(te)), 32, true);
  EXPECT_LT(rb::iou(a, b), 1.0);
}
