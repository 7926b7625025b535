#include "rb/reference.hpp"

#include <cmath>
#include <limits>

#include "rb/error.hpp"
#include "rb/metrics.hpp"
#include "rb/voxelize.hpp"

namespace rb::serial {

VoxelGrid voxelize_mesh(const TriangleMesh& mesh, int resolution, bool solid) {
  if (mesh.triangles.empty() || mesh.vertices.empty()) fail("empty shape");
  VoxelGrid shell(resolution);
  for (const auto& t : mesh.triangles) {
    rasterize_triangle(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], shell);
  }
  return solid ? fill_interior(shell) : shell;
}

VoxelGrid downsample(const VoxelGrid& grid, int factor, double frac) {
  const int res = grid.resolution();
  if (factor < 1 || res % factor != 0) fail("downsample factor does not divide resolution");
  const int out_res = res / factor;
  std::vector<int> counts(static_cast<std::size_t>(out_res) * out_res * out_res, 0);
  for (int z = 0; z < res; ++z)
    for (int y = 0; y < res; ++y)
      for (int x = 0; x < res; ++x)
        if (grid.get(x, y, z)) ++counts[x / factor + out_res * (y / factor + static_cast<std::size_t>(out_res) * (z / factor))];
  VoxelGrid out(out_res);
  const double block = std::pow(static_cast<double>(factor), 3);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] / block >= frac) out.set(i);
  }
  return out;
}

std::vector<double> point_distances(const PointCloud& from, const PointCloud& to) {
  if (from.points.empty() || to.points.empty()) fail("empty point cloud");
  std::vector<double> out;
  out.reserve(from.points.size());
  for (const Vec3& p : from.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : to.points) best = std::min(best, squared_distance(p, q));
    out.push_back(std::sqrt(best));
  }
  return out;
}

Matrix build_similarity_matrix(std::span<const VoxelGrid> grids) {
  Matrix s(grids.size(), grids.size());
  for (std::size_t i = 0; i < grids.size(); ++i)
    for (std::size_t j = 0; j < grids.size(); ++j) s(i, j) = iou(grids[i], grids[j]);
  return s;
}

std::vector<std::size_t> assign_nearest(std::span<const std::vector<float>> vectors, const Centroids& centroids) {
  std::vector<std::size_t> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.size(); ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double diff = v[i] - centroids[k][i];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    out.push_back(best);
  }
  return out;
}

NearestNeighbor oracle_nn(const VoxelGrid& test, std::span<const VoxelGrid> train) {
  if (train.empty()) fail("empty training set");
  NearestNeighbor best{0, -1.0};
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double v = iou(test, train[i]);
    if (v > best.iou) best = {i, v};
  }
  return best;
}

}  // namespace rb::serial
