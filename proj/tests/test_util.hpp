#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace testutil {

inline rb::VoxelGrid random_grid(int res, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  rb::VoxelGrid g(res);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (coin(rng)) g.set(i);
  }
  return g;
}

// Nonempty grid of axis-aligned random boxes.
inline rb::VoxelGrid random_blobs(int res, std::mt19937_64& rng, int boxes = 3) {
  std::uniform_int_distribution<int> pos(0, res - 1);
  rb::VoxelGrid g(res);
  for (int b = 0; b < boxes; ++b) {
    int lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = pos(rng);
      hi[a] = pos(rng);
      if (lo[a] > hi[a]) std::swap(lo[a], hi[a]);
    }
    for (int z = lo[2]; z <= hi[2]; ++z)
      for (int y = lo[1]; y <= hi[1]; ++y)
        for (int x = lo[0]; x <= hi[0]; ++x) g.set(x, y, z);
  }
  return g;
}

inline rb::PointCloud random_cloud(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rb::PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({u(rng), u(rng), u(rng)});
  return c;
}

inline std::vector<double> brute_distances(const rb::PointCloud& from, const rb::PointCloud& to) {
  std::vector<double> out;
  for (const auto& p : from.points) {
    double best = INFINITY;
    for (const auto& q : to.points) {
      const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
      best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    out.push_back(best);
  }
  return out;
}

inline double naive_iou(const rb::VoxelGrid& a, const rb::VoxelGrid& b) {
  std::size_t inter = 0, uni = 0;
  const int r = a.resolution();
  for (int z = 0; z < r; ++z)
    for (int y = 0; y < r; ++y)
      for (int x = 0; x < r; ++x) {
        const bool p = a.get(x, y, z), q = b.get(x, y, z);
        inter += p && q;
        uni += p || q;
      }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Every undirected edge bounded by exactly two faces, and each directed edge
// used once (consistent orientation).
inline bool is_closed_oriented(const rb::TriangleMesh& mesh) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> directed;
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) directed.push_back({t[i], t[(i + 1) % 3]});
  }
  std::sort(directed.begin(), directed.end());
  if (std::adjacent_find(directed.begin(), directed.end()) != directed.end()) return false;
  for (const auto& [a, b] : directed) {
    if (!std::binary_search(directed.begin(), directed.end(), std::make_pair(b, a))) return false;
  }
  return true;
}

inline long euler_characteristic(const rb::TriangleMesh& mesh) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      const auto a = t[i], b = t[(i + 1) % 3];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<std::uint32_t> used;
  for (const auto& t : mesh.triangles) used.insert(used.end(), t.begin(), t.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return static_cast<long>(used.size()) - static_cast<long>(edges.size()) + static_cast<long>(mesh.triangles.size());
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(std::filesystem::temp_directory_path() / ("rb_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
