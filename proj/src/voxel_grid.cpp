#include "rb/voxel_grid.hpp"

#include <bit>
#include <cstring>
#include <iostream>
#include <string>

#include "rb/error.hpp"

namespace rb {

void log_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

namespace {

std::size_t byte_count(std::size_t cells) { return (cells + 7) / 8; }

void check_resolution(int resolution) {
  if (resolution < 1 || resolution > kMaxResolution) {
    fail("voxel grid resolution out of range: " + std::to_string(resolution));
  }
}

template <typename Op>
std::size_t combined_popcount(const VoxelGrid& a, const VoxelGrid& b, Op op) {
  if (a.resolution() != b.resolution()) {
    fail("resolution mismatch: " + std::to_string(a.resolution()) + " vs " +
         std::to_string(b.resolution()));
  }
  const auto lhs = a.bytes();
  const auto rhs = b.bytes();
  const std::size_t n = lhs.size();
  std::size_t total = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    std::memcpy(&u, lhs.data() + i, 8);
    std::memcpy(&v, rhs.data() + i, 8);
    total += static_cast<std::size_t>(std::popcount(op(u, v)));
  }
  for (; i < n; ++i) {
    total += static_cast<std::size_t>(
        std::popcount(static_cast<std::uint8_t>(op(std::uint64_t{lhs[i]}, std::uint64_t{rhs[i]}))));
  }
  return total;
}

}  // namespace

VoxelGrid::VoxelGrid(int resolution) : resolution_(resolution) {
  check_resolution(resolution);
  cell_count_ = static_cast<std::size_t>(resolution) * resolution * resolution;
  bytes_.assign(byte_count(cell_count_), 0);
}

VoxelGrid::VoxelGrid(int resolution, std::vector<std::uint8_t> bytes) : VoxelGrid(resolution) {
  if (bytes.size() != bytes_.size()) {
    fail("occupancy payload has " + std::to_string(bytes.size()) + " bytes, expected " +
         std::to_string(bytes_.size()));
  }
  const std::size_t tail = cell_count_ % 8;
  if (tail != 0 && (bytes.back() >> tail) != 0) fail("occupancy padding bits are not zero");
  bytes_ = std::move(bytes);
}

std::size_t VoxelGrid::count() const noexcept {
  std::size_t total = 0;
  for (auto b : bytes_) total += static_cast<std::size_t>(std::popcount(b));
  return total;
}

std::vector<float> VoxelGrid::flatten() const {
  std::vector<float> out(cell_count_);
  for (std::size_t i = 0; i < cell_count_; ++i) out[i] = get(i) ? 1.0f : 0.0f;
  return out;
}

std::size_t intersection_count(const VoxelGrid& a, const VoxelGrid& b) {
  return combined_popcount(a, b, [](std::uint64_t u, std::uint64_t v) { return u & v; });
}

std::size_t union_count(const VoxelGrid& a, const VoxelGrid& b) {
  return combined_popcount(a, b, [](std::uint64_t u, std::uint64_t v) { return u | v; });
}

VoxelGrid threshold(const RealGrid& grid, float tau) {
  VoxelGrid out(grid.resolution);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.values[i] > tau) out.set(i);
  }
  return out;
}

}  // namespace rb
