#include "rb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rb/error.hpp"

namespace rb {

void TriangleMesh::append(const TriangleMesh& other) {
  const auto offset = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
}

double triangle_area(const TriangleMesh& mesh, const Triangle& t) {
  const Vec3 a = mesh.vertices[t[0]];
  return 0.5 * norm(cross(mesh.vertices[t[1]] - a, mesh.vertices[t[2]] - a));
}

double signed_volume(const TriangleMesh& mesh) {
  double volume = 0.0;
  for (const auto& t : mesh.triangles) {
    volume += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
  }
  return volume / 6.0;
}

void remove_degenerate_triangles(TriangleMesh& mesh) {
  const auto n = mesh.vertices.size();
  std::erase_if(mesh.triangles, [&](const Triangle& t) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) fail("triangle references a missing vertex");
    return t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || triangle_area(mesh, t) <= 0.0;
  });
}

bool valid_pose(const Pose& pose) {
  return pose.azimuth >= 0.0 && pose.azimuth < 360.0 && pose.elevation >= 0.0 &&
         pose.elevation < 50.0;
}

namespace {

// Returns the quadrant (0..3) when degrees is an exact multiple of 90.
int exact_quadrant(double degrees) {
  const double q = degrees / 90.0;
  if (q != std::floor(q) || !std::isfinite(q)) return -1;
  const auto m = static_cast<long long>(std::fmod(q, 4.0));
  return static_cast<int>((m + 4) % 4);
}

}  // namespace

double sin_degrees(double degrees) {
  constexpr double table[] = {0.0, 1.0, 0.0, -1.0};
  if (const int q = exact_quadrant(degrees); q >= 0) return table[q];
  return std::sin(degrees * std::numbers::pi / 180.0);
}

double cos_degrees(double degrees) {
  constexpr double table[] = {1.0, 0.0, -1.0, 0.0};
  if (const int q = exact_quadrant(degrees); q >= 0) return table[q];
  return std::cos(degrees * std::numbers::pi / 180.0);
}

Mat3 pose_rotation(const Pose& pose) {
  const double ca = cos_degrees(pose.azimuth);
  const double sa = sin_degrees(pose.azimuth);
  const double ce = cos_degrees(pose.elevation);
  const double se = sin_degrees(pose.elevation);
  // Rx(elevation) * Rz(azimuth)
  return {{{ca, -sa, 0.0}, {ce * sa, ce * ca, -se}, {se * sa, se * ca, ce}}};
}

Vec3 apply(const Mat3& m, Vec3 v) {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

TriangleMesh normalize_unit_cube(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) fail("empty shape");
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = lo * -1.0;
  for (const auto& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  }
  const Vec3 extent = hi - lo;
  const double side = std::max({extent.x, extent.y, extent.z});
  if (!(side > 0.0) || !std::isfinite(side)) fail("cannot normalize: all points coincident");

  TriangleMesh out;
  out.triangles = mesh.triangles;
  out.vertices.reserve(mesh.vertices.size());
  Vec3 offset;
  for (int a = 0; a < 3; ++a) offset[a] = 0.5 * (1.0 - extent[a] / side);
  for (const auto& v : mesh.vertices) {
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = (v[a] - lo[a]) / side + offset[a];
    out.vertices.push_back(p);
  }
  return out;
}

TriangleMesh rotate_mesh(const TriangleMesh& mesh, const Pose& pose) {
  if (!valid_pose(pose)) fail("pose out of range");
  const Mat3 r = pose_rotation(pose);
  TriangleMesh rotated;
  rotated.triangles = mesh.triangles;
  rotated.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) rotated.vertices.push_back(apply(r, v));
  return normalize_unit_cube(rotated);
}

}  // namespace rb
