#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rb {

using Centroids = std::vector<std::vector<double>>;

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Centroids centroids;
  // Objective (sum of squared distances) after every assignment step.
  std::vector<double> objective_history;
  int iterations = 0;
};

// Lloyd's algorithm from k-means++ seeding. On return every assignment is the
// nearest centroid (ties to the lower index). Empty clusters are re-seeded at
// the point farthest from its centroid.
KMeansResult kmeans(std::span<const std::vector<float>> vectors, std::size_t k, std::uint64_t seed,
                    int max_iters = 100);

double squared_distance(std::span<const float> v, std::span<const double> centroid);

std::size_t nearest_centroid(std::span<const float> v, const Centroids& centroids);

// Parallel over points.
std::vector<std::size_t> assign_nearest(std::span<const std::vector<float>> vectors,
                                        const Centroids& centroids);

double kmeans_objective(std::span<const std::vector<float>> vectors, const Centroids& centroids,
                        std::span<const std::size_t> assignments);

}  // namespace rb
