#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

inline constexpr std::uint8_t kVxbgVersion = 1;

// VXBG: "VXBG", version byte, u16 LE resolution, ceil(R^3/8) packed bytes.
void write_vxbg(std::ostream& out, const VoxelGrid& grid);
VoxelGrid read_vxbg(std::istream& in);
void save_vxbg(const std::filesystem::path& path, const VoxelGrid& grid);
VoxelGrid load_vxbg(const std::filesystem::path& path);

enum class PlyFormat { Ascii, BinaryLittleEndian };

using Rgb = std::array<std::uint8_t, 3>;

// Meshes are written with double-precision vertices so normalized geometry
// survives a round trip bit-exactly.
void save_ply(const std::filesystem::path& path, const TriangleMesh& mesh,
              PlyFormat format = PlyFormat::BinaryLittleEndian);
TriangleMesh load_ply_mesh(const std::filesystem::path& path);

// Point clouds carry either a float "dist" property (from cloud.scalars) or
// uchar red/green/blue when colors are given.
void save_ply(const std::filesystem::path& path, const PointCloud& cloud,
              PlyFormat format = PlyFormat::BinaryLittleEndian,
              const std::vector<Rgb>* colors = nullptr);

struct PlyPoints {
  PointCloud cloud;  // scalars filled from "dist" if present
  std::vector<Rgb> colors;
};
PlyPoints load_ply_points(const std::filesystem::path& path);

}  // namespace rb
