#pragma once

#include "rb/mesh.hpp"
#include "rb/voxel_grid.hpp"

namespace rb {

// Closed-box separating-axis test. half is the half-extent of the box.
bool triangle_box_overlap(Vec3 center, double half, Vec3 a, Vec3 b, Vec3 c);

// Marks the cells of grid (spanning [0,1]^3) that triangle abc passes through.
void rasterize_triangle(Vec3 a, Vec3 b, Vec3 c, VoxelGrid& grid);

// Rasterizes a mesh living in [0,1]^3. Every cell the surface passes through is
// marked; a triangle lying exactly on a cell face is attributed to the cell
// behind it (opposite its outward normal). With solid set, the enclosed volume
// is filled via fill_interior.
VoxelGrid voxelize_mesh(const TriangleMesh& mesh, int resolution, bool solid);

// Cells not 6-connected to the outside through empty cells become occupied.
VoxelGrid fill_interior(const VoxelGrid& grid);

// Block-reduces by factor: an output cell is set when at least frac of its
// factor^3 block is occupied.
VoxelGrid downsample(const VoxelGrid& grid, int factor, double frac = 0.5);

}  // namespace rb
