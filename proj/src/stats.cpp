#include "rb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "rb/error.hpp"

namespace rb {

std::vector<std::string> EvalReport::methods() const {
  std::set<std::string> s;
  for (const auto& e : entries) s.insert(e.method);
  return {s.begin(), s.end()};
}

std::vector<std::string> EvalReport::classes() const {
  std::set<std::string> s;
  for (const auto& e : entries) s.insert(e.class_label);
  return {s.begin(), s.end()};
}

bool EvalReport::has_metric(const std::string& metric) const {
  return std::any_of(entries.begin(), entries.end(), [&](const ReportEntry& e) { return e.metric == metric; });
}

std::vector<double> EvalReport::values(const std::string& metric, const std::string* method,
                                       const std::string* class_label) const {
  std::vector<double> out;
  for (const auto& e : entries) {
    if (e.metric != metric) continue;
    if (method && e.method != *method) continue;
    if (class_label && e.class_label != *class_label) continue;
    out.push_back(e.value);
  }
  return out;
}

void validate_report(const EvalReport& report) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& e : report.entries) {
    if (!std::isfinite(e.value)) fail("non-finite " + e.metric + " for " + e.shape_id + "/" + e.method);
    if (!seen.emplace(e.shape_id, e.method, e.metric).second) {
      fail("duplicate entry " + e.shape_id + "/" + e.method + "/" + e.metric);
    }
  }
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Summary summarize(std::span<const double> values) {
  if (values.empty()) fail("summary of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Summary s;
  s.n = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

AggregateTable per_class_aggregate(const EvalReport& report, const std::string& metric, const std::string* method) {
  if (!report.has_metric(metric)) fail("unknown metric '" + metric + "'");
  AggregateTable table;
  table.metric = metric;
  if (method) table.method = *method;
  for (const auto& c : report.classes()) {
    const auto v = report.values(metric, method, &c);
    if (!v.empty()) table.classes.push_back({c, summarize(v)});
  }
  const auto all = report.values(metric, method);
  if (all.empty()) fail("no values for metric '" + metric + "'");
  table.overall = summarize(all);
  return table;
}

std::vector<std::size_t> histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (bins < 1) fail("histogram needs at least one bin");
  if (!(lo < hi)) fail("histogram range must satisfy lo < hi");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    long long b = static_cast<long long>(std::floor((v - lo) / width));
    b = std::clamp<long long>(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double kTolerance = 1e-10;
  double q = 0.0;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small lambda:
    // P(K <= l) = sqrt(2 pi) / l * sum exp(-(2k-1)^2 pi^2 / (8 l^2)).
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * c);
      sum += term;
      if (term < kTolerance * sum) break;
    }
    q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    // Q(l) = 2 sum (-1)^(k-1) exp(-2 k^2 l^2)
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      q += sign * term;
      sign = -sign;
      if (term < kTolerance) break;
    }
    q *= 2.0;
  }
  return std::clamp(q, 0.0, 1.0);
}

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail("Kolmogorov-Smirnov test needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n1 = static_cast<double>(x.size());
  const auto n2 = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Step through the merged support, advancing past ties on both sides before
  // comparing the ECDFs.
  while (i < x.size() || j < y.size()) {
    double v;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KSResult r;
  r.d_stat = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double effective = n1 * n2 / (n1 + n2);
  r.p_value = kolmogorov_survival(std::sqrt(effective) * d);
  return r;
}

namespace {

std::vector<double> to_bin_centres(std::span<const double> values, const KsOptions& o) {
  const auto counts = histogram(values, o.bins, o.lo, o.hi);
  const double width = (o.hi - o.lo) / o.bins;
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out.insert(out.end(), counts[b], o.lo + (static_cast<double>(b) + 0.5) * width);
  }
  return out;
}

}  // namespace

KsHeatmap ks_heatmap(const EvalReport& report, std::span<const std::string> methods, const std::string& metric,
                     const KsOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (!report.has_metric(metric)) fail("unknown metric '" + metric + "'");
  const auto present = report.methods();
  for (const auto& m : methods) {
    if (!std::binary_search(present.begin(), present.end(), m)) fail("no data for method '" + m + "'");
  }
  KsHeatmap map;
  map.methods.assign(methods.begin(), methods.end());
  const std::size_t k = methods.size();
  map.counts.assign(k, std::vector<std::size_t>(k, 0));

  for (const auto& c : report.classes()) {
    std::vector<std::vector<double>> samples;
    bool usable = true;
    for (const auto& m : methods) {
      auto v = report.values(metric, &m, &c);
      if (v.size() < 2) usable = false;
      if (options.mode == KsMode::Binned) v = to_bin_centres(v, options);
      samples.push_back(std::move(v));
    }
    if (!usable) {
      log_warning("class '" + c + "' has fewer than 2 test values for some method; skipped in KS heatmap");
      continue;
    }
    map.classes.push_back(c);
    for (std::size_t i = 0; i < k; ++i) {
      ++map.counts[i][i];
      for (std::size_t j = i + 1; j < k; ++j) {
        if (ks_two_sample(samples[i], samples[j]).p_value >= options.alpha) {
          ++map.counts[i][j];
          ++map.counts[j][i];
        }
      }
    }
  }
  return map;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail("pearson: samples differ in length");
  if (x.size() < 2) fail("pearson needs at least two pairs");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) fail("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cutoff_fraction(std::span<const double> values, double cutoff) {
  if (values.empty()) fail("cutoff fraction of an empty sample");
  const auto hits = std::count_if(values.begin(), values.end(), [cutoff](double v) { return v >= cutoff; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace rb
