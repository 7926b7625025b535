#pragma once

#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

// Iso-surface at 0.5 of the binary field sampled at cell centres
// ((x + 0.5) / R, ...). The grid is padded by one empty layer, so the result
// is closed; vertices are shared along cube edges.
TriangleMesh marching_cubes(const VoxelGrid& grid);

}  // namespace rb
