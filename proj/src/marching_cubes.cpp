#include "rb/marching_cubes.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mc_tables.hpp"

namespace rb {

namespace {

struct EdgeRef {
  int dx, dy, dz;  // lower corner of the edge, relative to the cube origin
  int axis;
};

constexpr EdgeRef kEdges[12] = {
    {0, 0, 0, 0}, {1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {1, 0, 1, 1},
    {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 2}, {1, 0, 0, 2}, {1, 1, 0, 2}, {0, 1, 0, 2},
};

constexpr int kCorners[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

}  // namespace

TriangleMesh marching_cubes(const VoxelGrid& grid) {
  const int res = grid.resolution();
  // Padded lattice coordinates run over 0..res+1; lattice point p maps to cell p-1.
  const std::uint64_t side = static_cast<std::uint64_t>(res) + 2;
  const auto occupied = [&](int px, int py, int pz) {
    const int x = px - 1, y = py - 1, z = pz - 1;
    if (x < 0 || y < 0 || z < 0 || x >= res || y >= res || z >= res) return false;
    return grid.get(x, y, z);
  };
  const auto edge_key = [side](int px, int py, int pz, int axis) {
    return ((static_cast<std::uint64_t>(pz) * side + py) * side + px) * 3 + axis;
  };

  const int cubes = res + 1;
  std::vector<std::vector<std::uint64_t>> slabs(cubes);
#pragma omp parallel for schedule(dynamic, 1)
  for (int cz = 0; cz < cubes; ++cz) {
    auto& keys = slabs[cz];
    for (int cy = 0; cy < cubes; ++cy) {
      for (int cx = 0; cx < cubes; ++cx) {
        unsigned index = 0;
        for (int c = 0; c < 8; ++c) {
          if (!occupied(cx + kCorners[c][0], cy + kCorners[c][1], cz + kCorners[c][2])) {
            index |= 1u << c;
          }
        }
        if (index == 0 || index == 255) continue;
        const auto& row = detail::kTriangleTable[index];
        for (int t = 0; row[t] != -1; t += 3) {
          // Empty corners set the index bits, so table order is counter-clockwise
          // seen from outside.
          for (int k = 0; k < 3; ++k) {
            const EdgeRef& e = kEdges[row[t + k]];
            keys.push_back(edge_key(cx + e.dx, cy + e.dy, cz + e.dz, e.axis));
          }
        }
      }
    }
  }

  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_of;
  const double pitch = 1.0 / res;
  const auto vertex_for = [&](std::uint64_t key) {
    auto [it, inserted] = vertex_of.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (inserted) {
      const int axis = static_cast<int>(key % 3);
      std::uint64_t rest = key / 3;
      const auto px = static_cast<double>(rest % side);
      rest /= side;
      const auto py = static_cast<double>(rest % side);
      const auto pz = static_cast<double>(rest / side);
      // Lattice point p is the centre of cell p-1, at (p - 0.5) * pitch.
      Vec3 v{(px - 0.5) * pitch, (py - 0.5) * pitch, (pz - 0.5) * pitch};
      v[axis] += 0.5 * pitch;
      mesh.vertices.push_back(v);
    }
    return it->second;
  };
  for (const auto& keys : slabs) {
    for (std::size_t i = 0; i < keys.size(); i += 3) {
      mesh.triangles.push_back({vertex_for(keys[i]), vertex_for(keys[i + 1]), vertex_for(keys[i + 2])});
    }
  }
  remove_degenerate_triangles(mesh);
  return mesh;
}

}  // namespace rb
