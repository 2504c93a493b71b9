#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "debris/feature_select.hpp"
#include "debris/model.hpp"

namespace debris {

// Row-major view of an n x d matrix.
struct MatrixView {
  std::span<const double> values;
  std::size_t cols = 0;

  std::size_t rows() const { return cols == 0 ? 0 : values.size() / cols; }
  std::span<const double> row(std::size_t i) const { return values.subspan(i * cols, cols); }
};

struct KMeansConfig {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::size_t max_iter = 300;
};

struct KMeansModel {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<double> centroids;  // row-major k x dim
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after each assignment step
  std::size_t iterations = 0;
  bool converged = false;
  bool degenerate = false;  // empty-cluster reseeding could not separate points
  KMeansConfig config;

  // Set by the pipeline; describe the feature space the model was fitted in.
  FeatureSetId feature_set = FeatureSetId::A;
  std::vector<Feature> features;
  std::vector<double> scale_mean;  // empty unless z-scored
  std::vector<double> scale_std;

  std::span<const double> centroid(std::size_t j) const {
    return std::span<const double>(centroids).subspan(j * dim, dim);
  }
};

// Seeded k-means++ initialization followed by Lloyd iterations; ties in the
// assignment go to the lowest centroid index, empty clusters are reseeded to
// the point farthest from its centroid. Throws Error(TooFewRows) when rows < k.
KMeansModel kmeans_fit(MatrixView x, const KMeansConfig& config);

// argmin_j ||x - mu_j||^2 with ties to the lowest index.
// Throws Error(DimensionMismatch).
std::size_t kmeans_predict(const KMeansModel& model, std::span<const double> x);

std::vector<std::size_t> kmeans_assign(const KMeansModel& model, MatrixView x);
double kmeans_inertia(const KMeansModel& model, MatrixView x);

// Applies the model's stored z-score transform (identity when unscaled).
std::vector<double> model_space(const KMeansModel& model, std::span<const double> raw);

struct ClusterComposition {
  std::size_t size = 0;
  double share_of_total = 0.0;
  std::map<std::string, std::size_t> by_class;
  std::map<std::string, std::size_t> by_polymer;   // Plastic/Wood records
  std::map<std::string, std::size_t> by_coverage;  // Plastic only: "20".."100", "partial"
  std::map<std::string, std::size_t> by_scene;     // scene id or date
};

struct ClusterReport {
  FeatureSetId feature_set = FeatureSetId::A;
  std::size_t k = 0;
  std::size_t total = 0;
  std::vector<ClusterComposition> clusters;
  std::vector<std::size_t> assignments;  // per record, not serialized
};

// Coverage percentage bucket: next multiple of 20 at or above the value.
std::string coverage_bucket(const PixelRecord& record);

// Throws Error(FeatureSetMismatch) when `features` differs from the model's.
ClusterReport compose_report(const KMeansModel& model, const Dataset& dataset,
                             const FeatureSet& features);

struct TrendFlags {
  double two_cluster_share = 0.0;
  double low_coverage_absorbed = 0.0;
  std::map<Polymer, std::string> polymer_affinity;  // "water", "sand" or "tie"
  bool ldpe_isolation = false;
  bool water_sand_never_merged = true;
};

// Trends of a single clustering.
TrendFlags trend_flags(const ClusterReport& report);

struct TrendSummary {
  // Conservative aggregate: minimum shares, affinity only where every report
  // agrees ("mixed" otherwise), isolation/never-merged must hold everywhere.
  TrendFlags overall;
  std::vector<TrendFlags> per_report;
};

TrendSummary trend_checks(std::span<const ClusterReport> reports, const Dataset& dataset);

std::string to_json(const KMeansModel& model);
KMeansModel model_from_json(const std::string& text);
std::string to_json(const ClusterReport& report);
std::string to_json(const TrendSummary& summary, std::span<const ClusterReport> reports);

}  // namespace debris
