#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rb/embedding.hpp"
#include "rb/error.hpp"
#include "rb/metrics.hpp"
#include "rb/model_io.hpp"
#include "test_util.hpp"

namespace {

std::vector<rb::VoxelGrid> shapes(std::size_t n, std::mt19937_64& rng) {
  std::vector<rb::VoxelGrid> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(testutil::random_blobs(12, rng, 2));
  return out;
}

double row_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(Similarity, PairCases) {
  rb::VoxelGrid a(8), b(8);
  a.set(1, 1, 1);
  b.set(6, 6, 6);
  const std::vector<rb::VoxelGrid> same = {a, a};
  const auto s = rb::build_similarity_matrix(same);
  for (double v : s.data) EXPECT_EQ(v, 1.0);
  const std::vector<rb::VoxelGrid> disjoint = {a, b};
  const auto d = rb::build_similarity_matrix(disjoint);
  EXPECT_EQ(d(0, 0), 1.0);
  EXPECT_EQ(d(1, 1), 1.0);
  EXPECT_EQ(d(0, 1), 0.0);
  EXPECT_EQ(d(1, 0), 0.0);
}

TEST(Similarity, MatchesPairwiseIou) {
  std::mt19937_64 rng(1);
  const auto grids = shapes(20, rng);
  const auto s = rb::build_similarity_matrix(grids);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) {
      EXPECT_EQ(s(i, j), s(j, i));
      EXPECT_DOUBLE_EQ(s(i, j), testutil::naive_iou(grids[i], grids[j]));
    }
}

TEST(Similarity, ErrorsNameTheShape) {
  std::mt19937_64 rng(2);
  auto grids = shapes(3, rng);
  grids[1] = rb::VoxelGrid(12);
  const std::vector<std::string> ids = {"a", "hollow_one", "c"};
  try {
    rb::build_similarity_matrix(grids, ids);
    FAIL() << "expected an error";
  } catch (const rb::Error& e) {
    EXPECT_NE(std::string(e.what()).find("hollow_one"), std::string::npos);
  }
  EXPECT_THROW(rb::build_similarity_matrix(std::vector<rb::VoxelGrid>(1, grids[0])), rb::Error);
}

TEST(Embedding, BasisIsOrthonormal) {
  std::mt19937_64 rng(3);
  const auto s = rb::build_similarity_matrix(shapes(25, rng));
  const auto model = rb::fit_embedding(s, 10);
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b) {
      double dot = 0;
      for (std::size_t j = 0; j < 25; ++j) dot += model.basis(a, j) * model.basis(b, j);
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-9);
    }
}

TEST(Embedding, FullRankIsIsometry) {
  std::mt19937_64 rng(4);
  const std::size_t n = 30;
  const auto s = rb::build_similarity_matrix(shapes(n, rng));
  const auto model = rb::fit_embedding(s, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(row_distance(model.descriptors.row(i), model.descriptors.row(j)), row_distance(s.row(i), s.row(j)), 1e-6);
    }
}

TEST(Embedding, RankOneOrdering) {
  // S = u u^T with distinct u: the first component orders rows like u.
  const std::vector<double> u = {0.3, 0.9, 0.1, 0.5, 0.7, 0.2};
  rb::Matrix s(u.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) s(i, j) = u[i] * u[j];
  const auto model = rb::fit_embedding(s, 1);
  std::vector<std::size_t> by_u(u.size()), by_desc(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) by_u[i] = by_desc[i] = i;
  std::sort(by_u.begin(), by_u.end(), [&](auto a, auto b) { return u[a] < u[b]; });
  std::sort(by_desc.begin(), by_desc.end(), [&](auto a, auto b) { return model.descriptors(a, 0) < model.descriptors(b, 0); });
  EXPECT_EQ(by_u, by_desc);
}

TEST(Embedding, EmbedRowConsistency) {
  std::mt19937_64 rng(5);
  const std::size_t n = 15;
  const auto s = rb::build_similarity_matrix(shapes(n, rng));
  const auto model = rb::fit_embedding(s, 6);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = rb::embed_row(model, s.row(i));
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(d[k], model.descriptors(i, k));
  }
  for (double v : rb::embed_row(model, model.mean_row)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(rb::embed_row(model, std::vector<double>(n - 1, 0.0)), rb::Error);
}

TEST(Embedding, ProjectionIsOneLipschitz) {
  std::mt19937_64 rng(6);
  const std::size_t n = 20;
  const auto s = rb::build_similarity_matrix(shapes(n, rng));
  const auto model = rb::fit_embedding(s, 8);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(s.row(i).begin(), s.row(i).end());
    std::vector<double> eps(n);
    for (std::size_t j = 0; j < n; ++j) {
      eps[j] = noise(rng);
      row[j] += eps[j];
    }
    const auto d = rb::embed_row(model, row);
    const double norm_eps = row_distance(eps, std::vector<double>(n, 0.0));
    EXPECT_LE(row_distance(d, model.descriptors.row(i)), norm_eps + 1e-12);
  }
}

TEST(Retrieve, SelfAndOrthogonalQueries) {
  std::mt19937_64 rng(7);
  const auto s = rb::build_similarity_matrix(shapes(12, rng));
  const auto model = rb::fit_embedding(s, 12);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(rb::retrieve(model, model.descriptors.row(i), rb::SimilarityMode::Euclidean), i);
  }

  rb::EmbeddingModel two;
  two.mean_row = {0, 0};
  two.basis = rb::Matrix(2, 2);
  two.basis(0, 0) = two.basis(1, 1) = 1.0;
  two.descriptors = rb::Matrix(2, 2);
  two.descriptors(0, 0) = 1.0;
  two.descriptors(1, 1) = 1.0;
  const std::vector<double> q = {3.0, 0.0};
  EXPECT_EQ(rb::retrieve(two, q), 0u);
  const std::vector<double> tie = {1.0, 1.0};
  EXPECT_EQ(rb::retrieve(two, tie), 0u);
  EXPECT_THROW(rb::retrieve(two, std::vector<double>{0.0, 0.0}), rb::Error);
  EXPECT_THROW(rb::retrieve(two, std::vector<double>{1.0}), rb::Error);
  two.descriptors(1, 1) = 0.0;
  EXPECT_THROW(rb::retrieve(two, q), rb::Error);
}

TEST(Retrieve, EuclideanFullRankEqualsNearestRow) {
  std::mt19937_64 rng(8);
  const std::size_t n = 40;
  const auto train = shapes(n, rng);
  const auto model = rb::fit_embedding(rb::build_similarity_matrix(train), n);
  const auto s = rb::build_similarity_matrix(train);
  for (int q = 0; q < 40; ++q) {
    const auto query = testutil::random_blobs(12, rng, 2);
    const auto row = rb::similarity_row(query, train);
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = row_distance(row, s.row(i));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    EXPECT_EQ(rb::retrieve(model, rb::embed_row(model, row), rb::SimilarityMode::Euclidean), best);
  }
}

TEST(Embedding, DimensionErrors) {
  rb::Matrix s(3, 3);
  EXPECT_THROW(rb::fit_embedding(s, 4), rb::Error);
  EXPECT_THROW(rb::fit_embedding(s, 0), rb::Error);
}

TEST(ModelIo, EmbeddingRoundTrip) {
  std::mt19937_64 rng(9);
  const auto s = rb::build_similarity_matrix(shapes(10, rng));
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("shape_" + std::to_string(i));
  const auto model = rb::fit_embedding(s, 4, ids);
  std::stringstream ss;
  rb::write_model(ss, model, 12);
  int low = 0;
  const auto back = rb::read_embedding_model(ss, &low);
  EXPECT_EQ(low, 12);
  EXPECT_EQ(back.train_ids, ids);
  ASSERT_EQ(back.dim(), 4u);
  for (std::size_t i = 0; i < back.descriptors.data.size(); ++i) {
    EXPECT_EQ(back.descriptors.data[i], static_cast<double>(static_cast<float>(model.descriptors.data[i])));
  }
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(rb::retrieve(back, back.descriptors.row(i)), rb::retrieve(model, model.descriptors.row(i)));
  }
}
