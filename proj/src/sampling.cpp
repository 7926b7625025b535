#include "rb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rb/error.hpp"
#include "rb/random.hpp"

namespace rb {

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) fail("sample count must be at least 1");
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    total += triangle_area(mesh, t);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) fail("degenerate mesh");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    const auto& t = mesh.triangles[idx];
    const double r1 = std::sqrt(uniform01(rng));
    const double r2 = uniform01(rng);
    const Vec3 a = mesh.vertices[t[0]];
    const Vec3 b = mesh.vertices[t[1]];
    const Vec3 c = mesh.vertices[t[2]];
    cloud.points.push_back(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2));
  }
  return cloud;
}

}  // namespace rb
