#include "rb/voxelize.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <omp.h>

#include "rb/error.hpp"

namespace rb {

namespace {

// Surface triangles are nudged inward by kInwardShift and tested against
// boxes shrunk by kBoxShrink, so faces coinciding with cell boundaries land on
// exactly one side. Both are in unit-cube coordinates.
constexpr double kInwardShift = 1e-7;
constexpr double kBoxShrink = 2.5e-8;

bool axis_separates(Vec3 axis, Vec3 v0, Vec3 v1, Vec3 v2, double half) {
  const double p0 = dot(axis, v0);
  const double p1 = dot(axis, v1);
  const double p2 = dot(axis, v2);
  const double r = half * (std::abs(axis.x) + std::abs(axis.y) + std::abs(axis.z));
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

int cell_floor(double coordinate, int resolution) {
  const double scaled = std::floor(coordinate * resolution);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(resolution - 1)));
}

void merge_into(VoxelGrid& dst, const VoxelGrid& src) {
  const auto bytes = src.bytes();
  for (std::size_t i = 0; i < src.cell_count(); ++i) {
    if ((bytes[i >> 3] >> (i & 7)) & 1u) dst.set(i);
  }
}

}  // namespace

void rasterize_triangle(Vec3 a, Vec3 b, Vec3 c, VoxelGrid& grid) {
  const int res = grid.resolution();
  const Vec3 n = cross(b - a, c - a);
  if (const double len = norm(n); len > 0.0) {
    const Vec3 shift = n * (kInwardShift / len);
    a = a - shift;
    b = b - shift;
    c = c - shift;
  }

  int lo[3];
  int hi[3];
  for (int axis = 0; axis < 3; ++axis) {
    const double mn = std::min({a[axis], b[axis], c[axis]});
    const double mx = std::max({a[axis], b[axis], c[axis]});
    if (mx < 0.0 || mn > 1.0) return;
    lo[axis] = cell_floor(mn, res);
    hi[axis] = cell_floor(mx, res);
  }

  const double pitch = 1.0 / res;
  const double half = 0.5 * pitch - kBoxShrink;
  for (int z = lo[2]; z <= hi[2]; ++z) {
    for (int y = lo[1]; y <= hi[1]; ++y) {
      for (int x = lo[0]; x <= hi[0]; ++x) {
        const Vec3 center{(x + 0.5) * pitch, (y + 0.5) * pitch, (z + 0.5) * pitch};
        if (triangle_box_overlap(center, half, a, b, c)) grid.set(x, y, z);
      }
    }
  }
}

bool triangle_box_overlap(Vec3 center, double half, Vec3 a, Vec3 b, Vec3 c) {
  const Vec3 v0 = a - center;
  const Vec3 v1 = b - center;
  const Vec3 v2 = c - center;

  // Box face normals.
  for (int axis = 0; axis < 3; ++axis) {
    const double mn = std::min({v0[axis], v1[axis], v2[axis]});
    const double mx = std::max({v0[axis], v1[axis], v2[axis]});
    if (mn > half || mx < -half) return false;
  }

  // Triangle plane.
  const Vec3 e0 = v1 - v0;
  const Vec3 e1 = v2 - v1;
  const Vec3 e2 = v0 - v2;
  const Vec3 normal = cross(e0, e1);
  {
    const double d = dot(normal, v0);
    const double r = half * (std::abs(normal.x) + std::abs(normal.y) + std::abs(normal.z));
    if (std::abs(d) > r) return false;
  }

  // Edge cross products.
  const Vec3 units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const Vec3& e : {e0, e1, e2}) {
    for (const Vec3& u : units) {
      if (axis_separates(cross(u, e), v0, v1, v2, half)) return false;
    }
  }
  return true;
}

VoxelGrid voxelize_mesh(const TriangleMesh& mesh, int resolution, bool solid) {
  if (mesh.triangles.empty() || mesh.vertices.empty()) fail("empty shape");
  if (resolution < 8 || resolution > kMaxResolution) {
    fail("voxelization resolution out of range: " + std::to_string(resolution));
  }
  for (const auto& t : mesh.triangles) {
    for (auto i : t) {
      if (i >= mesh.vertices.size()) fail("triangle references a missing vertex");
    }
  }

  VoxelGrid shell(resolution);
  const auto n = static_cast<long long>(mesh.triangles.size());
#pragma omp parallel
  {
    VoxelGrid local(resolution);
#pragma omp for schedule(static)
    for (long long i = 0; i < n; ++i) {
      const Triangle& t = mesh.triangles[i];
      rasterize_triangle(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], local);
    }
#pragma omp critical(rb_voxelize_merge)
    merge_into(shell, local);
  }
  return solid ? fill_interior(shell) : shell;
}

VoxelGrid fill_interior(const VoxelGrid& grid) {
  const int res = grid.resolution();
  const int p = res + 2;
  const auto padded = [p](int x, int y, int z) {
    return static_cast<std::size_t>(x) + static_cast<std::size_t>(p) * (y + static_cast<std::size_t>(p) * z);
  };
  // 0 = unvisited empty, 1 = blocked (occupied), 2 = exterior
  std::vector<std::uint8_t> state(static_cast<std::size_t>(p) * p * p, 0);
  for (int z = 0; z < res; ++z)
    for (int y = 0; y < res; ++y)
      for (int x = 0; x < res; ++x)
        if (grid.get(x, y, z)) state[padded(x + 1, y + 1, z + 1)] = 1;

  std::vector<std::size_t> stack{0};
  state[0] = 2;
  const std::size_t stride_y = p;
  const std::size_t stride_z = static_cast<std::size_t>(p) * p;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const auto x = static_cast<int>(i % p);
    const auto y = static_cast<int>((i / stride_y) % p);
    const auto z = static_cast<int>(i / stride_z);
    const auto visit = [&](std::size_t j) {
      if (state[j] == 0) {
        state[j] = 2;
        stack.push_back(j);
      }
    };
    if (x > 0) visit(i - 1);
    if (x + 1 < p) visit(i + 1);
    if (y > 0) visit(i - stride_y);
    if (y + 1 < p) visit(i + stride_y);
    if (z > 0) visit(i - stride_z);
    if (z + 1 < p) visit(i + stride_z);
  }

  VoxelGrid out(res);
  for (int z = 0; z < res; ++z)
    for (int y = 0; y < res; ++y)
      for (int x = 0; x < res; ++x)
        if (state[padded(x + 1, y + 1, z + 1)] != 2) out.set(x, y, z);
  return out;
}

VoxelGrid downsample(const VoxelGrid& grid, int factor, double frac) {
  const int res = grid.resolution();
  if (factor < 1 || res % factor != 0) {
    fail("downsample factor " + std::to_string(factor) + " does not divide resolution " +
         std::to_string(res));
  }
  if (!(frac > 0.0 && frac <= 1.0)) fail("downsample fraction must lie in (0, 1]");
  const int out_res = res / factor;
  const double block = static_cast<double>(factor) * factor * factor;
  VoxelGrid out(out_res);
  // Neighbouring cells share bytes, so threads write flags and the packing is serial.
  std::vector<std::uint8_t> flags(out.cell_count(), 0);
#pragma omp parallel for schedule(static)
  for (int oz = 0; oz < out_res; ++oz) {
    for (int oy = 0; oy < out_res; ++oy) {
      for (int ox = 0; ox < out_res; ++ox) {
        std::size_t occupied = 0;
        for (int z = oz * factor; z < (oz + 1) * factor; ++z)
          for (int y = oy * factor; y < (oy + 1) * factor; ++y)
            for (int x = ox * factor; x < (ox + 1) * factor; ++x) occupied += grid.get(x, y, z);
        flags[out.index(ox, oy, oz)] = static_cast<double>(occupied) / block >= frac;
      }
    }
  }
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.set(i);
  }
  return out;
}

}  // namespace rb
