#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "debris/model.hpp"

namespace debris {

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t m = 0;
};

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum_k (-1)^(k-1)
// exp(-2 k^2 lambda^2), clamped to [0, 1]. Below lambda = 1 the equivalent
// theta-function series is summed instead, which converges without cancellation.
double kolmogorov_q(double lambda);

// Two-sample KS: D = sup |F_x - F_y|, p = Q(D sqrt(nm / (n + m))).
// Throws Error(EmptySample).
KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys);

struct CorrelationMatrix {
  std::vector<Feature> features;
  std::vector<double> entries;  // row-major, features.size()^2
  // Zero-variance features; their off-diagonal entries are reported as 0.
  std::vector<Feature> constant_features;

  std::size_t dim() const { return features.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
  double between(Feature a, Feature b) const;
};

// Pearson r over the records (optionally of one class) whose requested
// features are all defined. Throws Error(TooFewSamples) below two records.
CorrelationMatrix pearson_matrix(const Dataset& dataset, std::span<const Feature> features,
                                 std::optional<ClassLabel> class_filter = std::nullopt);

struct FeatureSummary {
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Inclusive linear-interpolation quantile of already sorted values.
double quantile_sorted(std::span<const double> sorted, double q);
FeatureSummary summarize(std::span<const double> values);

struct ClassSummary {
  std::vector<Feature> features;
  // Per present class, one summary per feature.
  std::map<ClassLabel, std::vector<FeatureSummary>> per_class;
  // Classes requested but absent from the dataset.
  std::vector<ClassLabel> empty_classes;
};

ClassSummary class_summary(const Dataset& dataset, std::span<const Feature> features);

// Per-band mean over records of one class; min_coverage_pct filters Plastic and
// Wood records (records without a numeric coverage are excluded by the filter).
// Throws Error(EmptySelection).
BandVector mean_signature(const Dataset& dataset, ClassLabel label,
                          std::optional<double> min_coverage_pct = std::nullopt);

// Full exploratory report as JSON text (keys sorted, 10 significant digits).
// When `other` is given, KS tables compare dataset vs other per feature, over
// all classes and per shared class.
std::string explore_report_json(const Dataset& dataset, const Dataset* other = nullptr);

}  // namespace debris
