#include <cstring>
#include <fstream>
#include <string>

#include "rb/error.hpp"
#include "rb/io.hpp"

namespace rb {

void write_vxbg(std::ostream& out, const VoxelGrid& grid) {
  const auto res = static_cast<std::uint16_t>(grid.resolution());
  const char header[7] = {'V', 'X', 'B', 'G', static_cast<char>(kVxbgVersion),
                          static_cast<char>(res & 0xff), static_cast<char>(res >> 8)};
  out.write(header, sizeof header);
  const auto bytes = grid.bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail("failed to write voxel grid");
}

VoxelGrid read_vxbg(std::istream& in) {
  unsigned char header[7];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) fail("truncated VXBG header");
  if (std::memcmp(header, "VXBG", 4) != 0) fail("not a VXBG file");
  if (header[4] != kVxbgVersion) fail("unsupported VXBG version " + std::to_string(header[4]));
  const int res = header[5] | (header[6] << 8);
  if (res < 1 || res > kMaxResolution) fail("VXBG resolution out of range");
  const std::size_t cells = static_cast<std::size_t>(res) * res * res;
  std::vector<std::uint8_t> bytes((cells + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    fail("truncated VXBG payload");
  }
  return VoxelGrid(res, std::move(bytes));
}

void save_vxbg(const std::filesystem::path& path, const VoxelGrid& grid) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  write_vxbg(out, grid);
}

VoxelGrid load_vxbg(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  return read_vxbg(in);
}

}  // namespace rb
