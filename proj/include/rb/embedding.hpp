#pragma once

#include <span>
#include <string>
#include <vector>

#include "rb/voxel_grid.hpp"

namespace rb {

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

// S[i][j] = IoU(grid i, grid j); symmetric with unit diagonal. The upper
// triangle is filled in parallel. ids (optional) name shapes in error messages.
Matrix build_similarity_matrix(std::span<const VoxelGrid> grids, std::span<const std::string> ids = {});

// IoU of a query shape against every training shape.
std::vector<double> similarity_row(const VoxelGrid& query, std::span<const VoxelGrid> train);

// Retrieval baseline embedding: rows of the similarity matrix are centred and
// projected onto their top principal directions.
struct EmbeddingModel {
  std::vector<std::string> train_ids;
  std::vector<double> mean_row;
  Matrix basis;        // dim x N, orthonormal rows
  Matrix descriptors;  // N x dim

  std::size_t dim() const noexcept { return basis.rows; }
};

EmbeddingModel fit_embedding(const Matrix& similarity, std::size_t dim, std::vector<std::string> train_ids = {});

// (row - mean_row) projected onto the basis.
std::vector<double> embed_row(const EmbeddingModel& model, std::span<const double> row);

enum class SimilarityMode { Cosine, Euclidean };

// Training index whose descriptor best matches the query: highest cosine
// similarity, or smallest Euclidean distance. Ties go to the lowest index.
std::size_t retrieve(const EmbeddingModel& model, std::span<const double> query,
                     SimilarityMode mode = SimilarityMode::Cosine);

}  // namespace rb
