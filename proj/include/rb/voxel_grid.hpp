#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rb {

inline constexpr int kMaxResolution = 512;

// Cubic binary occupancy grid, bit-packed with x varying fastest:
// cell (x, y, z) has linear index x + R*y + R*R*z and lives in bit (index % 8)
// of byte (index / 8). Padding bits past R^3 are always zero.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  explicit VoxelGrid(int resolution);
  VoxelGrid(int resolution, std::vector<std::uint8_t> bytes);

  int resolution() const noexcept { return resolution_; }
  std::size_t cell_count() const noexcept { return cell_count_; }
  bool empty() const noexcept { return count() == 0; }

  std::size_t index(int x, int y, int z) const noexcept {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(resolution_) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(resolution_) * z);
  }

  bool get(std::size_t i) const noexcept { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  bool get(int x, int y, int z) const noexcept { return get(index(x, y, z)); }
  void set(std::size_t i, bool value = true) noexcept {
    const auto mask = static_cast<std::uint8_t>(1u << (i & 7));
    if (value) {
      bytes_[i >> 3] |= mask;
    } else {
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
  }
  void set(int x, int y, int z, bool value = true) noexcept { set(index(x, y, z), value); }

  std::size_t count() const noexcept;

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  // Occupancy as a dense 0/1 vector, the feature layout used for clustering.
  std::vector<float> flatten() const;

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  int resolution_ = 0;
  std::size_t cell_count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

std::size_t intersection_count(const VoxelGrid& a, const VoxelGrid& b);
std::size_t union_count(const VoxelGrid& a, const VoxelGrid& b);

// Real-valued companion grid (per-cell average occupancy of a cluster).
struct RealGrid {
  int resolution = 0;
  std::vector<float> values;

  float at(int x, int y, int z) const {
    return values[static_cast<std::size_t>(x) +
                  static_cast<std::size_t>(resolution) *
                      (static_cast<std::size_t>(y) + static_cast<std::size_t>(resolution) * z)];
  }
};

// Cells with value strictly greater than tau.
VoxelGrid threshold(const RealGrid& grid, float tau);

}  // namespace rb
