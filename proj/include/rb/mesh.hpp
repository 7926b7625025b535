#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rb/vec3.hpp"

namespace rb {

using Triangle = std::array<std::uint32_t, 3>;

// Triangles are wound counter-clockwise seen from outside, so
// cross(b - a, c - a) points away from the solid.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const noexcept { return triangles.empty(); }
  void append(const TriangleMesh& other);

  friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;
};

struct PointCloud {
  std::vector<Vec3> points;
  // Optional per-point scalar (nearest-neighbour distance for visualization).
  std::vector<double> scalars;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

double triangle_area(const TriangleMesh& mesh, const Triangle& t);
double signed_volume(const TriangleMesh& mesh);

// Drops zero-area triangles. Throws on out-of-range indices.
void remove_degenerate_triangles(TriangleMesh& mesh);

// Viewing direction. Azimuth in [0, 360), elevation in [0, 50).
struct Pose {
  double azimuth = 0.0;
  double elevation = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

bool valid_pose(const Pose& pose);

}  // namespace rb
