#pragma once

#include <cstdint>

#include "rb/mesh.hpp"

namespace rb {

// n points, triangle chosen with probability proportional to area and the
// point uniform inside it. Deterministic for a fixed seed.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

}  // namespace rb
