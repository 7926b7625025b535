#pragma once

// Single-threaded reference versions of the parallel kernels. They are kept
// deliberately plain and serve as oracles for tests and as the baseline in the
// kernel benchmark.

#include <span>
#include <vector>

#include "rb/embedding.hpp"
#include "rb/kmeans.hpp"
#include "rb/mesh.hpp"
#include "rb/oracle.hpp"
#include "rb/voxel_grid.hpp"

namespace rb::serial {

VoxelGrid voxelize_mesh(const TriangleMesh& mesh, int resolution, bool solid);
VoxelGrid downsample(const VoxelGrid& grid, int factor, double frac);

// O(|from| * |to|) scan.
std::vector<double> point_distances(const PointCloud& from, const PointCloud& to);

Matrix build_similarity_matrix(std::span<const VoxelGrid> grids);
std::vector<std::size_t> assign_nearest(std::span<const std::vector<float>> vectors, const Centroids& centroids);
NearestNeighbor oracle_nn(const VoxelGrid& test, std::span<const VoxelGrid> train);

}  // namespace rb::serial
