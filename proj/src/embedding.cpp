#include "rb/embedding.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "rb/error.hpp"
#include "rb/metrics.hpp"

namespace rb {

namespace {

std::string shape_name(std::span<const std::string> ids, std::size_t i) {
  return i < ids.size() ? ids[i] : "#" + std::to_string(i);
}

}  // namespace

Matrix build_similarity_matrix(std::span<const VoxelGrid> grids, std::span<const std::string> ids) {
  const std::size_t n = grids.size();
  if (n < 2) fail("similarity matrix needs at least two shapes");
  for (std::size_t i = 0; i < n; ++i) {
    if (grids[i].empty()) fail("empty grid for shape " + shape_name(ids, i));
    if (grids[i].resolution() != grids[0].resolution()) fail("resolution mismatch for shape " + shape_name(ids, i));
  }
  Matrix s(n, n);
  const auto rows = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < rows; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = iou(grids[i], grids[j]);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

std::vector<double> similarity_row(const VoxelGrid& query, std::span<const VoxelGrid> train) {
  std::vector<double> row(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) row[i] = iou(query, train[i]);
  return row;
}

EmbeddingModel fit_embedding(const Matrix& similarity, std::size_t dim, std::vector<std::string> train_ids) {
  const std::size_t n = similarity.rows;
  if (similarity.cols != n || n == 0) fail("similarity matrix must be square and non-empty");
  if (dim < 1 || dim > n) fail("embedding dimension " + std::to_string(dim) + " outside [1, " + std::to_string(n) + "]");
  if (!train_ids.empty() && train_ids.size() != n) fail("train id count does not match similarity matrix");

  EmbeddingModel model;
  model.train_ids = std::move(train_ids);
  model.mean_row.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) model.mean_row[j] += similarity(i, j);
  }
  for (auto& m : model.mean_row) m /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) centered(i, j) = similarity(i, j) - model.mean_row[j];
  }
  const Eigen::MatrixXd covariance = centered.transpose() * centered / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) fail_invariant("eigendecomposition of the row covariance failed");

  // Eigenvalues ascend; take the top dim. Sign fixed so the largest-magnitude
  // component of each direction is positive.
  model.basis = Matrix(dim, n);
  for (std::size_t d = 0; d < dim; ++d) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(n - 1 - d));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (std::size_t j = 0; j < n; ++j) model.basis(d, j) = v(static_cast<Eigen::Index>(j));
  }

  model.descriptors = Matrix(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto desc = embed_row(model, similarity.row(i));
    for (std::size_t d = 0; d < dim; ++d) model.descriptors(i, d) = desc[d];
  }
  return model;
}

std::vector<double> embed_row(const EmbeddingModel& model, std::span<const double> row) {
  const std::size_t n = model.mean_row.size();
  if (row.size() != n) {
    fail("similarity row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
  }
  std::vector<double> out(model.dim(), 0.0);
  for (std::size_t d = 0; d < model.dim(); ++d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += (row[j] - model.mean_row[j]) * model.basis(d, j);
    out[d] = acc;
  }
  return out;
}

std::size_t retrieve(const EmbeddingModel& model, std::span<const double> query, SimilarityMode mode) {
  const std::size_t dim = model.dim();
  if (query.size() != dim) fail("query descriptor has the wrong dimension");
  const auto norm_of = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  const double qn = norm_of(query);
  if (mode == SimilarityMode::Cosine && qn == 0.0) fail("zero-norm query descriptor");

  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.descriptors.rows; ++i) {
    const auto d = model.descriptors.row(i);
    double score = 0.0;
    if (mode == SimilarityMode::Cosine) {
      const double dn = norm_of(d);
      if (dn == 0.0) fail("zero-norm training descriptor at index " + std::to_string(i));
      double dp = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dp += query[j] * d[j];
      score = dp / (qn * dn);
    } else {
      double dist = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dist += (query[j] - d[j]) * (query[j] - d[j]);
      score = -dist;
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

}  // namespace rb
