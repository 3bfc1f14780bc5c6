#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "brux/forest.hpp"
#include "brux/types.hpp"

namespace brux {

// Binary confusion counts; the positive class is Grinding (class index 1).
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        tn += other.tn;
        fp += other.fp;
        fn += other.fn;
        return *this;
    }
    // Counts with the positive/negative roles exchanged, for scoring the
    // negative class as if it were positive.
    ConfusionCounts swapped() const { return {tn, tp, fn, fp}; }

    bool operator==(const ConfusionCounts&) const = default;
};

// accuracy  = (tp + tn) / (tp + tn + fp + fn)
// precision = tp / (tp + fp)
// recall    = tp / (tp + fn)
// f1        = 2 * precision * recall / (precision + recall)
// A zero denominator yields 0 for that metric and sets its flag.
struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

// Raises EmptyEvaluation when no prediction has been counted yet.
Metrics compute_metrics(const ConfusionCounts& counts);

// Deterministic stratified k-fold partition: indices of each class are
// shuffled with the seeded RNG and dealt round-robin, so per-fold class
// counts differ by at most one. Returns k disjoint test folds covering all
// indices, each sorted ascending. Raises TooFewSamples when k < 2 or
// labels.size() < k.
std::vector<std::vector<int>> kfold_split(std::span<const int> labels, int k, std::uint64_t seed);

struct FoldResult {
    ConfusionCounts counts;
    double train_accuracy = 0.0;
    std::vector<double> importances;
};

struct MetricsReport {
    int folds = 0;
    std::uint64_t seed = 0;
    int n_samples = 0;
    ForestParams params;
    std::vector<FoldResult> fold_results;
    ConfusionCounts pooled;          // summed over test folds, positive = grinding
    double pooled_accuracy = 0.0;
    Metrics grinding;                // pooled metrics with Grinding as positive
    Metrics no_grinding;             // pooled metrics with NoGrinding as positive
    double mean_train_accuracy = 0.0;
    std::vector<std::string> feature_names;
    std::vector<double> mean_importances;  // per-fold importances, averaged
};

// k-fold cross-validation of the forest on (x, y): per fold, trains on the
// other folds (fold-specific forest seed derived from params.seed) and counts
// pooled test predictions. y holds class indices; both classes must appear in
// every training split.
MetricsReport cross_validate(const Matrix& x, const std::vector<int>& y,
                             const ForestParams& params, int k, std::uint64_t seed,
                             std::vector<std::string> feature_names = {});

// Structured text report, one "key value" pair per line. config_echo, when
// non-empty, is embedded verbatim between config.begin/config.end lines so a
// run can be reproduced from its own report.
void write_report(std::ostream& out, const MetricsReport& report,
                  const std::string& config_echo = {});
void write_report_file(const std::string& path, const MetricsReport& report,
                       const std::string& config_echo = {});

}  // namespace brux
