#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rb {

struct ReportEntry {
  std::string shape_id;
  std::string class_label;
  std::string method;
  std::string metric;
  double value = 0.0;
};

// A test item that produced no value for a method, with the reason.
struct SkipRecord {
  std::string shape_id;
  std::string class_label;
  std::string method;
  std::string reason;
};

// F-score (percent) at each of EvalReport::sweep_thresholds.
struct SweepRecord {
  std::string shape_id;
  std::string class_label;
  std::string method;
  std::vector<double> fscore;
};

struct EvalReport {
  std::vector<ReportEntry> entries;
  std::vector<SkipRecord> skips;
  std::vector<double> sweep_thresholds;
  std::vector<SweepRecord> sweeps;
  std::string config_json;  // snapshot of the run configuration
  std::string dataset_hash;

  std::vector<std::string> methods() const;  // sorted, unique
  std::vector<std::string> classes() const;  // sorted, unique
  bool has_metric(const std::string& metric) const;
  // Values of one metric, optionally restricted to a method and/or class, in entry order.
  std::vector<double> values(const std::string& metric, const std::string* method = nullptr,
                             const std::string* class_label = nullptr) const;
};

// Throws on non-finite values or duplicate (shape, method, metric).
void validate_report(const EvalReport& report);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for n = 1
};

// Quartiles by linear interpolation between order statistics.
Summary summarize(std::span<const double> values);

struct ClassSummary {
  std::string class_label;
  Summary summary;
};

struct AggregateTable {
  std::string metric;
  std::string method;  // empty when pooled over methods
  std::vector<ClassSummary> classes;
  Summary overall;
};

AggregateTable per_class_aggregate(const EvalReport& report, const std::string& metric,
                                   const std::string* method = nullptr);

// Equal-width bins, left-closed; the last bin also takes hi. Out-of-range
// values clamp to the end bins.
std::vector<std::size_t> histogram(std::span<const double> values, int bins = 50, double lo = 0.0,
                                   double hi = 1.0);

struct KSResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Complementary CDF of the limiting Kolmogorov distribution, Q(lambda).
double kolmogorov_survival(double lambda);

// Sup-distance between the two empirical CDFs, with the asymptotic p-value
// at effective size n1*n2/(n1+n2).
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Raw runs the test on per-shape values. Binned replaces every value by the
// centre of its histogram bin first.
enum class KsMode { Raw, Binned };

struct KsOptions {
  double alpha = 0.05;
  KsMode mode = KsMode::Raw;
  int bins = 50;
  double lo = 0.0;
  double hi = 1.0;
};

struct KsHeatmap {
  std::vector<std::string> methods;
  std::vector<std::string> classes;  // classes that entered the test
  std::vector<std::vector<std::size_t>> counts;  // classes where p >= alpha
};

// Classes where any method has fewer than two values are skipped with a warning.
KsHeatmap ks_heatmap(const EvalReport& report, std::span<const std::string> methods, const std::string& metric,
                     const KsOptions& options = {});

double pearson(std::span<const double> x, std::span<const double> y);

// Percentage of values >= cutoff.
double cutoff_fraction(std::span<const double> values, double cutoff);

}  // namespace rb
