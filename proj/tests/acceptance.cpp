// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rb/cluster_model.hpp"
#include "rb/dataset.hpp"
#include "rb/embedding.hpp"
#include "rb/error.hpp"
#include "rb/geometry.hpp"
#include "rb/marching_cubes.hpp"
#include "rb/metrics.hpp"
#include "rb/pipeline.hpp"
#include "rb/report.hpp"
#include "rb/sampling.hpp"
#include "rb/stats.hpp"
#include "rb/synthetic.hpp"
#include "rb/voxelize.hpp"

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

rb::VoxelGrid random_grid(int res, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  rb::VoxelGrid g(res);
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (coin(rng)) g.set(i);
  if (g.count() == 0) g.set(0);
  return g;
}

rb::PointCloud random_cloud(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rb::PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({u(rng), u(rng), u(rng)});
  return c;
}

rb::PointCloud jittered(const rb::PointCloud& c, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, sigma);
  rb::PointCloud out;
  for (const auto& p : c.points) out.points.push_back({p.x + nd(rng), p.y + nd(rng), p.z + nd(rng)});
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double mean_metric(const rb::EvalReport& r, const std::string& metric, const std::string& method) {
  const auto v = r.values(metric, &method);
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? NAN : s / static_cast<double>(v.size());
}

rb::RunConfig desk_config(const fs::path& base) {
  rb::RunConfig c;
  c.root = base / "data";
  c.out = base / "run";
  return c;
}

// ------------------------------------------------------------------ criteria

Outcome metric_identities() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_grid(16, density(rng), rng);
    const auto b = random_grid(16, density(rng), rng);
    o.require(rb::iou(a, a) == 1.0, "iou(a,a) != 1");
    o.require(rb::iou(a, b) == rb::iou(b, a), "iou not symmetric");
    const auto x = random_cloud(1000, rng);
    const auto y = jittered(x, 0.02, rng);
    o.require(rb::chamfer(x, x) == 0.0, "chamfer(x,x) != 0");
    o.require(rb::chamfer(x, y) == rb::chamfer(y, x), "chamfer not symmetric");
    const auto prf = rb::precision_recall_f(x, x, 0.01);
    o.require(prf.precision == 100.0 && prf.recall == 100.0 && prf.fscore == 100.0, "PRF(x,x) != 100");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 10.0, "runtime over 10 s");
  if (o.pass) o.detail = "100 trials in " + std::to_string(secs) + " s";
  return o;
}

Outcome brute_force_equivalence() {
  Outcome o;
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto a = random_cloud(500, rng);
    const auto b = random_cloud(500, rng);
    const auto d = rb::point_distances(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double best = INFINITY;
      for (const auto& q : b.points) {
        const double dx = a.points[i].x - q.x, dy = a.points[i].y - q.y, dz = a.points[i].z - q.z;
        best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
      worst = std::max(worst, std::abs(best - d[i]));
    }
  }
  o.require(worst <= 1e-12, "point_distances off by " + std::to_string(worst));

  for (int t = 0; t < 50; ++t) {
    const auto a = random_grid(16, 0.3, rng);
    const auto b = random_grid(16, 0.5, rng);
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.cell_count(); ++i) {
      inter += a.get(i) && b.get(i);
      uni += a.get(i) || b.get(i);
    }
    o.require(rb::iou(a, b) == static_cast<double>(inter) / static_cast<double>(uni), "iou differs from counting");
  }

  std::uniform_int_distribution<int> coarse(0, 30);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(80 + t), b(120 - t);
    for (auto& v : a) v = coarse(rng) / 30.0;
    for (auto& v : b) v = coarse(rng) / 25.0;
    std::vector<double> support(a);
    support.insert(support.end(), b.begin(), b.end());
    double dmax = 0.0;
    for (double x : support) {
      double fa = 0, fb = 0;
      for (double v : a) fa += v <= x;
      for (double v : b) fb += v <= x;
      dmax = std::max(dmax, std::abs(fa / a.size() - fb / b.size()));
    }
    o.require(rb::ks_two_sample(a, b).d_stat == dmax, "KS D differs from merged ECDF");
  }
  if (o.pass) o.detail = "max distance error " + std::to_string(worst);
  return o;
}

Outcome fscore_semantics() {
  Outcome o;
  std::mt19937_64 rng(303);
  const std::vector<double> sweep = {0.0025, 0.005, 0.01, 0.02, 0.05, 0.1, 0.5, 2.0};
  for (int t = 0; t < 50; ++t) {
    const auto g = random_cloud(400, rng);
    auto r = jittered(g, 0.005 + 0.002 * t, rng);
    if (t % 5 == 0) {
      for (auto& p : r.points) p.x += 3.0;  // far away: P = R = 0 at small d
    }
    const auto points = rb::fscore_sweep(g, r, sweep);
    double previous = -1.0;
    for (const auto& sp : points) {
      const auto& p = sp.prf;
      o.require(p.fscore >= previous, "F decreased with d");
      previous = p.fscore;
      if (p.precision == 0.0 || p.recall == 0.0) {
        o.require(p.fscore == 0.0, "F nonzero with P or R zero");
      } else {
        const double h = 2.0 * p.precision * p.recall / (p.precision + p.recall);
        o.require(std::abs(h - p.fscore) <= 1e-12, "harmonic-mean identity broken");
      }
    }
  }
  return o;
}

Outcome chamfer_outlier_witness() {
  Outcome o;
  rb::PointCloud g, near, far;
  for (int i = 0; i < 90; ++i) {
    const rb::Vec3 p{0.01 * (i % 10), 0.01 * (i / 10), 0.0};
    g.points.push_back(p);
    near.points.push_back(p);
    far.points.push_back(p);
  }
  for (int i = 0; i < 10; ++i) {
    near.points.push_back({0.05 * i, 0.0, 0.2});
    far.points.push_back({0.05 * i, 0.0, 0.9});
  }
  const double f1 = rb::precision_recall_f(g, near, 0.01).fscore;
  const double f2 = rb::precision_recall_f(g, far, 0.01).fscore;
  const double c1 = rb::chamfer(g, near), c2 = rb::chamfer(g, far);
  const double rel = std::abs(c2 - c1) / std::min(c1, c2);
  o.require(std::abs(f1 - f2) <= 1e-9, "F differs");
  o.require(rel >= 0.2, "CD differs by only " + std::to_string(rel));
  o.detail = "F " + std::to_string(f1) + " vs " + std::to_string(f2) + ", CD rel diff " + std::to_string(rel);
  return o;
}

Outcome threshold_oracle() {
  Outcome o;
  const auto grid = rb::default_tau_grid();
  const auto exhaustive = [&](const std::vector<rb::VoxelGrid>& members) {
    const std::size_t n = members[0].cell_count();
    std::vector<double> mean(n, 0.0);
    for (const auto& m : members)
      for (std::size_t i = 0; i < n; ++i) mean[i] += m.get(i);
    for (auto& v : mean) v /= static_cast<double>(members.size());
    float best_tau = grid.front();
    double best = -1.0;
    for (float tau : grid) {
      double total = 0.0;
      for (const auto& m : members) {
        std::size_t inter = 0, uni = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const bool p = static_cast<float>(mean[i]) > tau;
          inter += p && m.get(i);
          uni += p || m.get(i);
        }
        total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
      }
      const double avg = total / static_cast<double>(members.size());
      if (avg > best) {  // strict: the smallest tau keeps ties
        best = avg;
        best_tau = tau;
      }
    }
    return best_tau;
  };
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> density(0.1, 0.7);
  for (int t = 0; t < 50; ++t) {
    std::vector<rb::VoxelGrid> members;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) members.push_back(random_grid(8, density(rng), rng));
    const auto choice = rb::optimal_threshold(rb::mean_shape(members), members, grid);
    o.require(choice.tau == exhaustive(members), "tau differs from exhaustive search");
  }
  rb::VoxelGrid a(2), ab(2);
  a.set(0);
  ab.set(0);
  ab.set(1);
  const std::vector<rb::VoxelGrid> pair = {a, ab};
  const auto choice = rb::optimal_threshold(rb::mean_shape(pair), pair, grid);
  o.require(choice.tau == 0.05f, "worked example tau " + std::to_string(choice.tau));
  return o;
}

Outcome embedding_fidelity() {
  Outcome o;
  std::mt19937_64 rng(808);
  std::vector<rb::VoxelGrid> train;
  for (int i = 0; i < 40; ++i) train.push_back(random_grid(10, 0.2 + 0.01 * i, rng));
  const auto s = rb::build_similarity_matrix(train);
  const auto model = rb::fit_embedding(s, s.rows);
  const auto dist = [](std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(acc);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = i + 1; j < s.rows; ++j)
      worst = std::max(worst, std::abs(dist(model.descriptors.row(i), model.descriptors.row(j)) - dist(s.row(i), s.row(j))));
  o.require(worst <= 1e-6, "descriptor distance error " + std::to_string(worst));

  for (int q = 0; q < 60; ++q) {
    const auto query = random_grid(10, 0.15 + 0.01 * q, rng);
    const auto row = rb::similarity_row(query, train);
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < s.rows; ++i) {
      const double d = dist(row, s.row(i));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    o.require(rb::retrieve(model, rb::embed_row(model, row), rb::SimilarityMode::Euclidean) == best,
              "Euclidean retrieval differs from nearest row");
  }
  if (o.pass) o.detail = "max distance error " + std::to_string(worst);
  return o;
}

Outcome ks_calibration() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> a(100);
  for (auto& x : a) x = nd(rng);
  const auto same = rb::ks_two_sample(a, a);
  o.require(same.d_stat == 0.0 && same.p_value == 1.0, "identical samples not D=0, p=1");
  const std::vector<double> lo(100, 0.1), hi(100, 0.9);
  const auto apart = rb::ks_two_sample(lo, hi);
  o.require(apart.p_value < 1e-6, "disjoint p = " + std::to_string(apart.p_value));
  int rejected = 0;
  std::vector<double> x(100), y(100);
  for (int t = 0; t < 1000; ++t) {
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    rejected += rb::ks_two_sample(x, y).p_value < 0.05;
  }
  const double rate = rejected / 1000.0;
  o.require(rate >= 0.03 && rate <= 0.08, "rejection rate " + std::to_string(rate));
  if (o.pass) o.detail = "rejection rate " + std::to_string(rate);
  return o;
}

Outcome geometry_round_trip() {
  Outcome o;
  const int res = 64;
  const double pitch = 1.0 / res;
  const auto sphere = rb::make_ellipsoid({0.5, 0.5, 0.5}, {0.4, 0.4, 0.4}, 64, 128);
  const auto grid = rb::voxelize_mesh(sphere, res, true);
  const auto surface = rb::marching_cubes(grid);
  const auto cloud = rb::sample_surface(surface, 10000, 1010);
  double worst = 0.0;
  for (const auto& p : cloud.points) {
    const double dx = p.x - 0.5, dy = p.y - 0.5, dz = p.z - 0.5;
    worst = std::max(worst, std::abs(std::sqrt(dx * dx + dy * dy + dz * dz) - 0.4));
  }
  o.require(cloud.size() == 10000, "wrong sample count");
  o.require(worst <= pitch, "point off sphere by " + std::to_string(worst));
  const double back = rb::iou(grid, rb::voxelize_mesh(surface, res, true));
  o.require(back >= 0.95, "re-voxelization IoU " + std::to_string(back));
  o.detail = "max radial error " + std::to_string(worst) + ", IoU " + std::to_string(back);
  return o;
}

Outcome viewer_frame() {
  Outcome o;
  for (const auto recipe : rb::kAllRecipes) {
    rb::ShapeSpec spec;
    spec.recipe = recipe;
    spec.seed = 1111;
    const auto mesh = rb::generate_synthetic(spec);
    const auto object = rb::materialize_grid(mesh, 48, std::nullopt);
    o.require(rb::materialize_grid(mesh, 48, rb::Pose{0.0, 0.0}) == object,
              std::string(rb::recipe_name(recipe)) + ": identity pose differs");
    auto turned = mesh;
    for (int i = 0; i < 3; ++i) turned = rb::rotate_mesh(turned, {90.0, 0.0});
    o.require(rb::materialize_grid(turned, 48, rb::Pose{90.0, 0.0}) == object,
              std::string(rb::recipe_name(recipe)) + ": four quarter turns differ");
  }
  return o;
}

// ------------------------------------------------------------------ pipeline

struct DeskRun {
  rb::RunConfig config;
  rb::EvalReport report;
  double seconds = 0.0;
};

DeskRun desk_run(const fs::path& base, const std::function<void(rb::RunConfig&)>& tweak = {}) {
  fs::remove_all(base);
  DeskRun r{desk_config(base), {}, 0.0};
  if (tweak) tweak(r.config);
  const auto t0 = Clock::now();
  rb::run_all(r.config);
  r.seconds = seconds_since(t0);
  r.report = rb::load_report(rb::report_path(r.config));
  return r;
}

Outcome oracle_dominance(const DeskRun& run) {
  Outcome o;
  o.require(run.config.classes >= 8 && run.config.per_class >= 40 && run.config.resolution == 64, "not desk scale");
  const std::string oracle = "oracle_nn", retrieval = "retrieval";
  const auto ov = run.report.values("iou", &oracle);
  const auto rv = run.report.values("iou", &retrieval);
  o.require(!ov.empty() && ov.size() == rv.size(), "missing values");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < std::min(ov.size(), rv.size()); ++i) ok += ov[i] >= rv[i];
  o.require(ok == ov.size(), std::to_string(ok) + "/" + std::to_string(ov.size()) + " shapes");
  if (o.pass) {
    o.detail = std::to_string(ok) + "/" + std::to_string(ov.size()) + " test shapes, mIoU oracle " +
               std::to_string(mean_metric(run.report, "iou", oracle)) + " retrieval " +
               std::to_string(mean_metric(run.report, "iou", retrieval));
  }
  return o;
}

Outcome contamination(const fs::path& work) {
  Outcome o;
  const auto oracle_only = [](double level) {
    return [level](rb::RunConfig& c) {
      c.methods = {"oracle_nn"};
      c.contamination = level;
    };
  };
  const auto full = desk_run(work / "contaminated", oracle_only(1.0));
  const auto clean = desk_run(work / "disjoint", oracle_only(0.0));
  const double m1 = mean_metric(full.report, "iou", "oracle_nn");
  const double m0 = mean_metric(clean.report, "iou", "oracle_nn");
  o.require(m1 >= 1.0 - 1e-12, "contaminated mIoU " + std::to_string(m1));
  o.require(m1 - m0 >= 0.1, "drop only " + std::to_string(m1 - m0));
  o.detail = "mIoU " + std::to_string(m1) + " -> " + std::to_string(m0);
  return o;
}

Outcome determinism(const DeskRun& a, const DeskRun& b) {
  Outcome o;
  o.require(a.seconds < 300.0 && b.seconds < 300.0, "run took over 5 minutes");
  o.require(slurp(rb::report_path(a.config)) == slurp(rb::report_path(b.config)), "report.json differs");
  std::size_t files = 0;
  for (const auto& f : fs::directory_iterator(rb::reports_dir(a.config))) {
    const auto other = rb::reports_dir(b.config) / f.path().filename();
    o.require(fs::exists(other) && slurp(f.path()) == slurp(other), f.path().filename().string() + " differs");
    ++files;
  }
  o.require(files > 0, "no report files");
  if (o.pass) {
    o.detail = std::to_string(files) + " report files identical, runs " + std::to_string(a.seconds) + " s and " +
               std::to_string(b.seconds) + " s";
  }
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& ex) {
    return {false, std::string("exception: ") + ex.what()};
  }
}

}  // namespace

int main() {
  const fs::path work = fs::current_path() / "acceptance_work";
  int failures = 0;
  const auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s %2d %s%s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "metric identities", guarded(metric_identities));
  report(2, "brute-force equivalence", guarded(brute_force_equivalence));
  report(3, "F-score semantics", guarded(fscore_semantics));
  report(4, "chamfer outlier witness", guarded(chamfer_outlier_witness));
  report(5, "threshold oracle", guarded(threshold_oracle));

  DeskRun first, second;
  Outcome runs;
  try {
    first = desk_run(work / "desk_a");
    second = desk_run(work / "desk_b");
  } catch (const std::exception& ex) {
    runs = {false, std::string("exception: ") + ex.what()};
  }
  report(6, "oracle-NN dominance", runs.pass ? guarded([&] { return oracle_dominance(first); }) : runs);
  report(7, "contamination experiment", guarded([&] { return contamination(work); }));
  report(8, "embedding fidelity", guarded(embedding_fidelity));
  report(9, "KS calibration", guarded(ks_calibration));
  report(10, "geometry round trip", guarded(geometry_round_trip));
  report(11, "viewer frame", guarded(viewer_frame));
  report(12, "determinism and runtime", runs.pass ? guarded([&] { return determinism(first, second); }) : runs);

  fs::remove_all(work);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
