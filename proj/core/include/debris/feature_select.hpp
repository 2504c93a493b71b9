#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "debris/explore_stats.hpp"
#include "debris/model.hpp"

namespace debris {

// CART tree with Gini impurity over a dense row-major feature matrix.
struct TreeNode {
  bool leaf = true;
  std::size_t feature = 0;  // column in the training matrix
  double threshold = 0.0;   // go left when x[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<double> class_weights;  // weighted class distribution at the node
  double impurity = 0.0;
  double weight = 0.0;
  std::size_t depth = 0;

  std::size_t majority() const;  // ties -> lowest class index
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::size_t max_depth = 3;

  std::size_t predict(std::span<const double> x) const;
  std::size_t depth() const;
  std::size_t split_count() const;
};

// A training problem: n rows, d columns, integer labels in [0, n_classes).
struct TrainingData {
  std::span<const double> x;  // row-major n x d
  std::span<const std::uint32_t> y;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;

  std::size_t rows() const { return y.size(); }
  double at(std::size_t row, std::size_t col) const { return x[row * n_features + col]; }
};

// Fits a tree with per-row weights (all 1 when weights is empty).
// Candidate thresholds are midpoints between consecutive distinct values;
// the best split maximizes the weighted impurity decrease, ties going to the
// lower feature index, then the lower threshold. A node becomes a leaf when
// pure, at max_depth, or when no split strictly decreases impurity.
// Throws Error(DimensionMismatch).
DecisionTree fit_tree(const TrainingData& data, std::size_t max_depth,
                      std::span<const double> weights = {});

// Weighted impurity decrease per feature, as accumulated by fit_tree.
std::vector<double> tree_importances(const DecisionTree& tree);

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_depth = 3;
  double split_fraction = 0.75;
  std::uint64_t seed = 0;
};

struct ImportanceReport {
  std::vector<Feature> features;
  std::vector<double> importances;  // aligned with features; sums to 1
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<ClassLabel> classes;  // classes present, in label order
  ForestConfig config;
  std::string label;  // free-form run name, e.g. "full" or "water_plastic"

  double importance(Feature f) const;
};

// Stratified split (per class, seeded shuffle, round(split * n_c) to train),
// bootstrap per tree, all features considered at every node, majority vote.
// Throws Error(SingleClass) when fewer than two classes are present.
ImportanceReport fit_forest(const Dataset& dataset, std::span<const Feature> features,
                            const ForestConfig& config);

// Forest fitted on `train`, evaluated on every record of `test`.
double cross_domain_accuracy(const Dataset& train, const Dataset& test,
                             std::span<const Feature> features, const ForestConfig& config);

enum class FeatureSetId { A, B, C, D };

std::string_view to_string(FeatureSetId id);
FeatureSetId feature_set_from_name(std::string_view name);  // throws Error(Config)

struct FeatureSet {
  FeatureSetId id = FeatureSetId::A;
  std::vector<Feature> features;
  // D only: the correlation gate had to be relaxed to the full matrix.
  bool relaxed = false;
};

inline constexpr double kCorrelationGate = 0.75;

// A = all 19, B = bands, C = indices, D = top-2 by importance plus the two
// candidates with the smallest max |r| against both, restricted to
// |r| < 0.75 in `corr` and every matrix of `per_class`.
// Throws Error(NoEligibleCandidate) if even the relaxed gate leaves < 2.
std::vector<FeatureSet> build_feature_sets(const ImportanceReport& report,
                                           const CorrelationMatrix& corr,
                                           std::span<const CorrelationMatrix> per_class);

FeatureSet fixed_feature_set(FeatureSetId id);

std::string to_json(const ImportanceReport& report);
std::string to_json(const FeatureSet& set);

}  // namespace debris
