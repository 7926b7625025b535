// Times each OpenMP kernel against its serial reference and checks that both
// produce the same output.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "rb/embedding.hpp"
#include "rb/geometry.hpp"
#include "rb/kmeans.hpp"
#include "rb/metrics.hpp"
#include "rb/oracle.hpp"
#include "rb/random.hpp"
#include "rb/reference.hpp"
#include "rb/sampling.hpp"
#include "rb/synthetic.hpp"
#include "rb/voxelize.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "match" : "MISMATCH");
}

std::vector<rb::VoxelGrid> random_shapes(int count, int res, std::uint64_t seed) {
  std::vector<rb::VoxelGrid> out;
  for (int i = 0; i < count; ++i) {
    rb::ShapeSpec spec;
    spec.recipe = rb::kAllRecipes[i % std::size(rb::kAllRecipes)];
    spec.seed = rb::derive_seed(seed, std::to_string(i));
    out.push_back(rb::voxelize_mesh(rb::normalize_unit_cube(rb::generate_synthetic(spec)), res, true));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  {
    const auto mesh = rb::normalize_unit_cube(rb::make_ellipsoid({0, 0, 0}, {1, 1, 1}, 96, 192));
    rb::VoxelGrid a(8), b(8);
    const double s = time_ms([&] { a = rb::serial::voxelize_mesh(mesh, 128, true); }, repeats);
    const double p = time_ms([&] { b = rb::voxelize_mesh(mesh, 128, true); }, repeats);
    report("voxelize 128^3", s, p, a == b);
    rb::VoxelGrid c(8), d(8);
    const double s2 = time_ms([&] { c = rb::serial::downsample(a, 4, 0.5); }, repeats);
    const double p2 = time_ms([&] { d = rb::downsample(a, 4, 0.5); }, repeats);
    report("downsample 128->32", s2, p2, c == d);
  }
  {
    const auto mesh = rb::make_ellipsoid({0.5, 0.5, 0.5}, {0.4, 0.3, 0.2});
    const auto g = rb::sample_surface(mesh, 10000, 1);
    const auto r = rb::sample_surface(mesh, 10000, 2);
    std::vector<double> a, b;
    const double s = time_ms([&] { a = rb::serial::point_distances(g, r); }, 1);
    const double p = time_ms([&] { b = rb::point_distances(g, r); }, repeats);
    report("distances 10k x 10k", s, p, a == b);
  }
  const auto shapes = random_shapes(160, 32, 11);
  {
    rb::Matrix a, b;
    const double s = time_ms([&] { a = rb::serial::build_similarity_matrix(shapes); }, repeats);
    const double p = time_ms([&] { b = rb::build_similarity_matrix(shapes); }, repeats);
    report("similarity 160x160", s, p, a.data == b.data);
  }
  {
    std::vector<std::vector<float>> vectors;
    for (const auto& g : shapes) vectors.push_back(g.flatten());
    const auto fit = rb::kmeans(vectors, 16, 3, 5);
    std::vector<std::size_t> a, b;
    const double s = time_ms([&] { a = rb::serial::assign_nearest(vectors, fit.centroids); }, repeats);
    const double p = time_ms([&] { b = rb::assign_nearest(vectors, fit.centroids); }, repeats);
    report("kmeans assign k=16", s, p, a == b);
  }
  {
    const auto test = shapes.front();
    rb::NearestNeighbor a, b;
    const double s = time_ms([&] { a = rb::serial::oracle_nn(test, shapes); }, repeats);
    const double p = time_ms([&] { b = rb::oracle_nn(test, shapes); }, repeats);
    report("oracle nn 160", s, p, a.index == b.index && a.iou == b.iou);
  }
  return 0;
}
