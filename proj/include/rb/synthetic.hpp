#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rb/mesh.hpp"

namespace rb {

// Procedural stand-ins for object categories. Composite recipes are unions of
// overlapping closed primitives.
enum class Recipe { Box, Cylinder, Sphere, LBracket, Table, Chair, Lamp, Cross };

inline constexpr Recipe kAllRecipes[] = {Recipe::Box,   Recipe::Cylinder, Recipe::Sphere,
                                         Recipe::LBracket, Recipe::Table, Recipe::Chair,
                                         Recipe::Lamp,  Recipe::Cross};

std::string_view recipe_name(Recipe recipe);
std::optional<Recipe> parse_recipe(std::string_view name);

// Which part of each parameter's jitter interval an instance draws from.
// Train instances use the lower half, uncontaminated test instances the upper
// half, so the two never share a shape. Any samples the whole interval.
enum class SplitRole { Any, Train, Test };

struct ShapeSpec {
  std::string class_id;
  Recipe recipe = Recipe::Box;
  // Relative half-width of every jittered parameter, in [0, 0.9].
  double jitter = 0.35;
  std::uint64_t seed = 0;
  SplitRole role = SplitRole::Any;
  // Probability that a Test instance is an exact copy of a training instance.
  double contamination = 0.0;
  // Seeds of the class's training instances; contaminated test shapes copy one.
  std::vector<std::uint64_t> train_seeds;
};

TriangleMesh generate_synthetic(const ShapeSpec& spec);

// Closed convex primitives, counter-clockwise outward.
TriangleMesh make_box(Vec3 lo, Vec3 hi);
TriangleMesh make_cylinder(Vec3 base_center, double radius, double height, int segments = 32);
TriangleMesh make_ellipsoid(Vec3 center, Vec3 radii, int stacks = 24, int slices = 48);

}  // namespace rb
