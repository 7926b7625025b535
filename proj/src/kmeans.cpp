#include "rb/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rb/error.hpp"
#include "rb/random.hpp"

namespace rb {

double squared_distance(std::span<const float> v, std::span<const double> centroid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = static_cast<double>(v[i]) - centroid[i];
    sum += d * d;
  }
  return sum;
}

std::size_t nearest_centroid(std::span<const float> v, const Centroids& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(v, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<std::size_t> assign_nearest(std::span<const std::vector<float>> vectors,
                                        const Centroids& centroids) {
  std::vector<std::size_t> out(vectors.size());
  const auto n = static_cast<long long>(vectors.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i) out[i] = nearest_centroid(vectors[i], centroids);
  return out;
}

double kmeans_objective(std::span<const std::vector<float>> vectors, const Centroids& centroids,
                        std::span<const std::size_t> assignments) {
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) total += squared_distance(vectors[i], centroids[assignments[i]]);
  return total;
}

namespace {

std::vector<double> as_centroid(const std::vector<float>& v) { return {v.begin(), v.end()}; }

Centroids seed_plus_plus(std::span<const std::vector<float>> vectors, std::size_t k, Rng& rng) {
  const std::size_t n = vectors.size();
  Centroids centroids;
  std::vector<bool> chosen(n, false);
  std::size_t first = uniform_index(rng, n);
  centroids.push_back(as_centroid(vectors[first]));
  chosen[first] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(vectors[i], centroids[0]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] == 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point duplicates a centre already taken.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    centroids.push_back(as_centroid(vectors[pick]));
    const auto& c = centroids.back();
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(vectors[i], c));
  }
  return centroids;
}

void update_centroids(std::span<const std::vector<float>> vectors, std::vector<std::size_t>& assignments,
                      Centroids& centroids) {
  const std::size_t k = centroids.size();
  const std::size_t dim = vectors.front().size();
  std::vector<std::size_t> counts(k, 0);
  for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto& c = centroids[assignments[i]];
    const auto& v = vectors[i];
    for (std::size_t j = 0; j < dim; ++j) c[j] += v[j];
    ++counts[assignments[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (auto& x : centroids[c]) x /= static_cast<double>(counts[c]);
  }

  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    std::size_t far = vectors.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (counts[assignments[i]] < 2) continue;
      const double d = squared_distance(vectors[i], centroids[assignments[i]]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == vectors.size()) fail_invariant("k-means could not repair an empty cluster");
    --counts[assignments[far]];
    assignments[far] = c;
    counts[c] = 1;
    centroids[c] = as_centroid(vectors[far]);
  }
}

}  // namespace

KMeansResult kmeans(std::span<const std::vector<float>> vectors, std::size_t k, std::uint64_t seed,
                    int max_iters) {
  if (k == 0) fail("k must be positive");
  if (k > vectors.size()) {
    fail("k = " + std::to_string(k) + " exceeds the number of vectors (" + std::to_string(vectors.size()) + ")");
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) fail("k-means vectors differ in length");
  }
  if (max_iters < 1) fail("max_iters must be positive");

  Rng rng(seed);
  KMeansResult result;
  result.centroids = seed_plus_plus(vectors, k, rng);
  for (int it = 0; it < max_iters; ++it) {
    auto next = assign_nearest(vectors, result.centroids);
    result.objective_history.push_back(kmeans_objective(vectors, result.centroids, next));
    result.iterations = it + 1;
    const bool converged = it > 0 && next == result.assignments;
    result.assignments = std::move(next);
    if (converged || it + 1 == max_iters) break;
    update_centroids(vectors, result.assignments, result.centroids);
  }
  return result;
}

}  // namespace rb
