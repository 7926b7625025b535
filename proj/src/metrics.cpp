#include "rb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rb/error.hpp"
#include "rb/kdtree.hpp"

namespace rb {

double iou(const VoxelGrid& a, const VoxelGrid& b) {
  const std::size_t uni = union_count(a, b);  // checks resolutions
  if (uni == 0) fail("IoU undefined: both grids are empty");
  return static_cast<double>(intersection_count(a, b)) / static_cast<double>(uni);
}

std::vector<double> point_distances(const PointCloud& from, const PointCloud& to) {
  if (from.empty() || to.empty()) fail("empty point cloud");
  const KdTree tree(to.points);
  std::vector<double> out(from.size());
  const auto n = static_cast<long long>(from.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) out[i] = std::sqrt(tree.nearest(from.points[i]).squared_distance);
  return out;
}

double chamfer_from_distances(std::span<const double> e_r, std::span<const double> e_g, std::optional<double> clamp) {
  if (e_r.empty() || e_g.empty()) fail("empty point cloud");
  const auto mean = [&](std::span<const double> e) {
    double sum = 0.0;
    for (double v : e) sum += clamp ? std::min(v, *clamp) : v;
    return sum / static_cast<double>(e.size());
  };
  return mean(e_r) + mean(e_g);
}

double chamfer(const PointCloud& g, const PointCloud& r, std::optional<double> clamp) {
  const auto e_r = point_distances(r, g);
  const auto e_g = point_distances(g, r);
  return chamfer_from_distances(e_r, e_g, clamp);
}

namespace {

double percent_below(std::span<const double> e, double d) {
  const auto hits = std::count_if(e.begin(), e.end(), [d](double v) { return v < d; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(e.size());
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

void check_threshold(double d) {
  if (!(d > 0.0)) fail("distance threshold must be positive");
}

}  // namespace

PRF prf_from_distances(std::span<const double> e_r, std::span<const double> e_g, double d) {
  check_threshold(d);
  if (e_g.empty()) fail("empty ground-truth point cloud");
  PRF out;
  if (e_r.empty()) {
    out.empty_reconstruction = true;
    return out;
  }
  out.precision = percent_below(e_r, d);
  out.recall = percent_below(e_g, d);
  out.fscore = harmonic(out.precision, out.recall);
  return out;
}

PRF precision_recall_f(const PointCloud& g, const PointCloud& r, double d) {
  check_threshold(d);
  if (g.empty()) fail("empty ground-truth point cloud");
  if (r.empty()) return prf_from_distances({}, std::vector<double>(g.size()), d);
  const auto e_r = point_distances(r, g);
  const auto e_g = point_distances(g, r);
  return prf_from_distances(e_r, e_g, d);
}

std::vector<SweepPoint> fscore_sweep(const PointCloud& g, const PointCloud& r,
                                     std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) fail("thresholds must be sorted ascending");
  if (g.empty()) fail("empty ground-truth point cloud");
  std::vector<double> e_r;
  std::vector<double> e_g(g.size());
  if (!r.empty()) {
    e_r = point_distances(r, g);
    e_g = point_distances(g, r);
  }
  std::vector<SweepPoint> curve;
  curve.reserve(thresholds.size());
  for (double d : thresholds) curve.push_back({d, prf_from_distances(e_r, e_g, d)});
  return curve;
}

Rgb distance_color(double distance, double d) {
  check_threshold(d);
  const double t = std::clamp(distance / (2.0 * d), 0.0, 1.0);
  Rgb out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<std::uint8_t>(std::lround(kNearColor[c] + t * (kFarColor[c] - kNearColor[c])));
  }
  return out;
}

}  // namespace rb
