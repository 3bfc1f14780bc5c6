#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brux/rng.hpp"
#include "brux/types.hpp"

namespace brux {

enum class MaxFeaturesRule {
    Sqrt,   // floor(sqrt(n_features)), at least 1
    All,    // every feature at every node
    Fixed,  // exactly max_features_k, clamped to [1, n_features]
};

struct ForestParams {
    int n_estimators = 90;
    int min_samples_split = 2;
    MaxFeaturesRule max_features_rule = MaxFeaturesRule::Sqrt;
    int max_features_k = 0;   // only with MaxFeaturesRule::Fixed
    int max_depth = -1;       // -1 = unlimited
    std::uint64_t seed = 0;

    bool operator==(const ForestParams&) const = default;
};

// Node of a binary decision tree stored in a flat array. feature_index < 0
// marks a leaf. Internal nodes route x[feature] <= threshold to left.
// class_counts holds the training-sample class histogram of the node (kept on
// internal nodes too, so importances can be recomputed from the stored model);
// split_gain is the impurity decrease the split achieved.
struct TreeNode {
    int feature_index = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::int64_t> class_counts;
    double split_gain = 0.0;

    bool is_leaf() const { return feature_index < 0; }

    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // pre-order; nodes[0] is the root

    bool operator==(const Tree&) const = default;
};

struct ForestModel {
    std::vector<Tree> trees;
    int n_classes = 0;
    int n_features = 0;
    std::vector<std::string> feature_names;
    ForestParams params;
    int n_training_samples = 0;

    bool operator==(const ForestModel&) const = default;
};

// Gini impurity 1 - sum_c p_c^2 of a class histogram.
// Raises EmptyNode when the histogram is empty.
double gini(std::span<const std::int64_t> class_counts);

struct SplitCandidate {
    int feature_index = 0;
    double threshold = 0.0;
    double gain = 0.0;  // parent impurity minus size-weighted child impurity
};

// Best axis-aligned split of the given rows over the given feature subset.
// Candidate thresholds are midpoints between consecutive distinct sorted
// values; ties on gain resolve to the lower feature index, then the lower
// threshold. Returns nullopt when no candidate has positive gain.
std::optional<SplitCandidate> best_split(const Matrix& x, std::span<const int> rows,
                                         std::span<const int> y, std::span<const int> features,
                                         int n_classes);

// RNG stream for one tree, derived deterministically from the forest seed.
SeededRng tree_rng(std::uint64_t forest_seed, int tree_index);

// n indices drawn uniformly with replacement, in draw order.
std::vector<int> bootstrap_indices(int n, SeededRng& rng);

// Trains a forest of CART-style trees on bootstrap resamples. y holds class
// indices 0..C-1. Raises TooFewSamples for fewer than 2 rows and
// DegenerateDataset when fewer than 2 classes are present.
ForestModel fit(const Matrix& x, const std::vector<int>& y, const ForestParams& params,
                std::vector<std::string> feature_names = {});

// Majority vote over per-tree leaf majorities; all ties resolve to the lower
// class index. Raises DimensionMismatch when x width differs from the model.
int predict(const ForestModel& model, std::span<const double> x);
std::vector<int> predict(const ForestModel& model, const Matrix& x);

// Mean decrease in impurity per feature: sum over internal nodes of
// (node samples / root samples) * impurity decrease, averaged over trees and
// normalized to sum 1. no_splits is set (with all-zero values) when no tree
// contains a single split.
struct FeatureImportance {
    std::vector<double> values;
    bool no_splits = false;
};
FeatureImportance feature_importance(const ForestModel& model);

// Versioned, self-describing text serialization. Doubles are written in
// shortest round-trip form, so save -> load reproduces the model exactly.
void save_model(const std::string& path, const ForestModel& model);
std::string model_to_text(const ForestModel& model);
ForestModel load_model(const std::string& path);
ForestModel model_from_text(const std::string& text);

}  // namespace brux
