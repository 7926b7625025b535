#include "rb/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rb/error.hpp"
#include "rb/random.hpp"

namespace rb {

namespace {

constexpr std::array<std::string_view, 8> kRecipeNames = {
    "box", "cylinder", "sphere", "lbracket", "table", "chair", "lamp", "cross"};

// Flips every triangle whose normal points toward the interior point.
void orient_outward(TriangleMesh& mesh, Vec3 interior) {
  for (auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]];
    const Vec3 n = cross(mesh.vertices[t[1]] - a, mesh.vertices[t[2]] - a);
    const Vec3 centroid = (a + mesh.vertices[t[1]] + mesh.vertices[t[2]]) * (1.0 / 3.0);
    if (dot(n, centroid - interior) < 0.0) std::swap(t[1], t[2]);
  }
}

// Draws jittered parameters. All recipes keep one dominant dimension fixed at
// 1 so that normalization cannot map the train and test halves onto each other.
class ParameterSampler {
 public:
  ParameterSampler(double jitter, SplitRole role, std::uint64_t seed)
      : jitter_(jitter), role_(role), rng_(seed) {}

  double operator()(double base) {
    double lo = 0.0;
    double hi = 1.0;
    if (role_ == SplitRole::Train) hi = 0.5;
    if (role_ == SplitRole::Test) lo = 0.5;
    const double u = uniform(rng_, lo, hi);
    return base * (1.0 + jitter_ * (2.0 * u - 1.0));
  }

 private:
  double jitter_;
  SplitRole role_;
  Rng rng_;
};

TriangleMesh build(Recipe recipe, ParameterSampler& p) {
  TriangleMesh mesh;
  switch (recipe) {
    case Recipe::Box: {
      mesh = make_box({0, 0, 0}, {1.0, p(0.7), p(0.5)});
      break;
    }
    case Recipe::Cylinder: {
      mesh = make_cylinder({0, 0, 0}, p(0.3), 1.0);
      break;
    }
    case Recipe::Sphere: {
      mesh = make_ellipsoid({0, 0, 0}, {0.5, p(0.4), p(0.3)});
      break;
    }
    case Recipe::LBracket: {
      const double arm_z = p(0.7);
      const double thick = p(0.2);
      const double depth = p(0.5);
      mesh = make_box({0, 0, 0}, {1.0, depth, thick});
      mesh.append(make_box({0, 0, 0}, {thick, depth, arm_z}));
      break;
    }
    case Recipe::Table: {
      const double depth = p(0.6);
      const double height = p(0.7);
      const double top = p(0.08);
      const double leg = p(0.09);
      mesh = make_box({0, 0, height - top}, {1.0, depth, height});
      for (double x : {0.0, 1.0 - leg}) {
        for (double y : {0.0, depth - leg}) mesh.append(make_box({x, y, 0}, {x + leg, y + leg, height}));
      }
      break;
    }
    case Recipe::Chair: {
      const double seat_h = p(0.45);
      const double seat_t = p(0.08);
      const double back_h = p(0.5);
      const double leg = p(0.08);
      const double back_t = p(0.08);
      const double width = p(0.6);
      mesh = make_box({0, 0, seat_h - seat_t}, {width, 0.6, seat_h});
      for (double x : {0.0, width - leg}) {
        for (double y : {0.0, 0.6 - leg}) mesh.append(make_box({x, y, 0}, {x + leg, y + leg, seat_h}));
      }
      mesh.append(make_box({0, 0.6 - back_t, seat_h - seat_t}, {width, 0.6, seat_h + back_h}));
      // Rescale so the overall height is the dominant, fixed dimension.
      const double total = seat_h + back_h;
      for (auto& v : mesh.vertices) v = v * (1.0 / total);
      break;
    }
    case Recipe::Lamp: {
      const double base_r = p(0.25);
      const double base_h = p(0.06);
      const double pole_r = p(0.035);
      const double shade_r = p(0.22);
      const double shade_h = p(0.25);
      const double pole_h = 1.0 - shade_h;
      mesh = make_cylinder({0, 0, 0}, base_r, base_h);
      mesh.append(make_cylinder({0, 0, 0}, pole_r, pole_h + 0.01));
      mesh.append(make_cylinder({0, 0, pole_h}, shade_r, shade_h));
      break;
    }
    case Recipe::Cross: {
      const double len_x = p(0.7);
      const double thick = p(0.22);
      const double depth = p(0.3);
      const double cx = 0.5 * len_x;
      const double cz = 0.6;
      mesh = make_box({0, 0, cz - 0.5 * thick}, {len_x, depth, cz + 0.5 * thick});
      mesh.append(make_box({cx - 0.5 * thick, 0, 0}, {cx + 0.5 * thick, depth, 1.0}));
      break;
    }
  }
  return mesh;
}

}  // namespace

std::string_view recipe_name(Recipe recipe) { return kRecipeNames[static_cast<std::size_t>(recipe)]; }

std::optional<Recipe> parse_recipe(std::string_view name) {
  for (std::size_t i = 0; i < kRecipeNames.size(); ++i) {
    if (kRecipeNames[i] == name) return static_cast<Recipe>(i);
  }
  return std::nullopt;
}

TriangleMesh make_box(Vec3 lo, Vec3 hi) {
  TriangleMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  // Quads per face as corner bit patterns.
  constexpr std::uint32_t quads[6][4] = {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1},
                                         {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}};
  for (const auto& q : quads) {
    mesh.triangles.push_back({q[0], q[1], q[2]});
    mesh.triangles.push_back({q[0], q[2], q[3]});
  }
  orient_outward(mesh, (lo + hi) * 0.5);
  return mesh;
}

TriangleMesh make_cylinder(Vec3 base_center, double radius, double height, int segments) {
  TriangleMesh mesh;
  const auto n = static_cast<std::uint32_t>(segments);
  for (std::uint32_t ring = 0; ring < 2; ++ring) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / n;
      mesh.vertices.push_back({base_center.x + radius * std::cos(angle),
                               base_center.y + radius * std::sin(angle),
                               base_center.z + ring * height});
    }
  }
  const std::uint32_t bottom = 2 * n;
  const std::uint32_t top = 2 * n + 1;
  mesh.vertices.push_back(base_center);
  mesh.vertices.push_back({base_center.x, base_center.y, base_center.z + height});
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    mesh.triangles.push_back({i, j, n + j});
    mesh.triangles.push_back({i, n + j, n + i});
    mesh.triangles.push_back({bottom, j, i});
    mesh.triangles.push_back({top, n + i, n + j});
  }
  orient_outward(mesh, {base_center.x, base_center.y, base_center.z + 0.5 * height});
  return mesh;
}

TriangleMesh make_ellipsoid(Vec3 center, Vec3 radii, int stacks, int slices) {
  TriangleMesh mesh;
  const auto ns = static_cast<std::uint32_t>(slices);
  mesh.vertices.push_back({center.x, center.y, center.z - radii.z});
  for (int s = 1; s < stacks; ++s) {
    const double phi = std::numbers::pi * s / stacks - 0.5 * std::numbers::pi;
    for (int k = 0; k < slices; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / slices;
      mesh.vertices.push_back({center.x + radii.x * std::cos(phi) * std::cos(theta),
                               center.y + radii.y * std::cos(phi) * std::sin(theta),
                               center.z + radii.z * std::sin(phi)});
    }
  }
  const auto north = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back({center.x, center.y, center.z + radii.z});
  const auto ring = [ns](int s, std::uint32_t k) { return 1 + static_cast<std::uint32_t>(s - 1) * ns + k % ns; };
  for (std::uint32_t k = 0; k < ns; ++k) {
    mesh.triangles.push_back({0, ring(1, k + 1), ring(1, k)});
    mesh.triangles.push_back({north, ring(stacks - 1, k), ring(stacks - 1, k + 1)});
    for (int s = 1; s + 1 < stacks; ++s) {
      mesh.triangles.push_back({ring(s, k), ring(s, k + 1), ring(s + 1, k + 1)});
      mesh.triangles.push_back({ring(s, k), ring(s + 1, k + 1), ring(s + 1, k)});
    }
  }
  orient_outward(mesh, center);
  return mesh;
}

TriangleMesh generate_synthetic(const ShapeSpec& spec) {
  if (!(spec.jitter >= 0.0 && spec.jitter <= 0.9)) fail("jitter must lie in [0, 0.9]");
  if (!(spec.contamination >= 0.0 && spec.contamination <= 1.0)) {
    fail("contamination must lie in [0, 1]");
  }
  std::uint64_t seed = spec.seed;
  SplitRole role = spec.role;
  if (role == SplitRole::Test) {
    Rng pick(splitmix64(spec.seed ^ 0x636f6e74616d696eULL));
    if (uniform01(pick) < spec.contamination) {
      if (spec.train_seeds.empty()) fail("contaminated test shape needs a training pool");
      seed = spec.train_seeds[uniform_index(pick, spec.train_seeds.size())];
      role = SplitRole::Train;
    }
  }
  ParameterSampler sampler(spec.jitter, role, seed);
  return build(spec.recipe, sampler);
}

}  // namespace rb
