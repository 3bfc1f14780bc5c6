#include "brux/eval.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "brux/errors.hpp"
#include "brux/rng.hpp"

namespace brux {

Metrics compute_metrics(const ConfusionCounts& counts) {
    if (counts.tp < 0 || counts.tn < 0 || counts.fp < 0 || counts.fn < 0) {
        raise(Errc::InvalidArgument, "negative confusion counts");
    }
    if (counts.total() == 0) {
        raise(Errc::EmptyEvaluation, "metrics requested before any prediction was counted");
    }

    Metrics m;
    m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());

    if (counts.tp + counts.fp > 0) {
        m.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    } else {
        m.precision_undefined = true;
    }
    if (counts.tp + counts.fn > 0) {
        m.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    } else {
        m.recall_undefined = true;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1_undefined = true;
    }
    return m;
}

std::vector<std::vector<int>> kfold_split(std::span<const int> labels, int k, std::uint64_t seed) {
    const int n = static_cast<int>(labels.size());
    if (k < 2) raise(Errc::TooFewSamples, "need at least 2 folds");
    if (n < k) {
        raise(Errc::TooFewSamples, std::to_string(n) + " samples cannot fill " +
                                       std::to_string(k) + " folds");
    }

    int n_classes = 0;
    for (int label : labels) {
        if (label < 0) raise(Errc::InvalidArgument, "class indices must be non-negative");
        n_classes = std::max(n_classes, label + 1);
    }

    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(n_classes));
    for (int i = 0; i < n; ++i) {
        by_class[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
    }

    // Shuffle within each class, then deal one by one with a fold cursor that
    // carries over between classes. That keeps per-fold class counts within
    // one of each other and fold sizes within one overall.
    SeededRng rng(seed);
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    int cursor = 0;
    for (auto& members : by_class) {
        rng.shuffle(members);
        for (int index : members) {
            folds[static_cast<std::size_t>(cursor % k)].push_back(index);
            ++cursor;
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

MetricsReport cross_validate(const Matrix& x, const std::vector<int>& y,
                             const ForestParams& params, int k, std::uint64_t seed,
                             std::vector<std::string> feature_names) {
    if (x.rows != static_cast<int>(y.size())) {
        raise(Errc::DimensionMismatch, "labels and rows disagree");
    }
    const auto folds = kfold_split(y, k, seed);

    MetricsReport report;
    report.folds = k;
    report.seed = seed;
    report.n_samples = x.rows;
    report.params = params;
    report.feature_names = feature_names;
    report.mean_importances.assign(static_cast<std::size_t>(x.cols), 0.0);

    std::vector<char> in_test(static_cast<std::size_t>(x.rows));
    for (int fold = 0; fold < k; ++fold) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (int index : folds[static_cast<std::size_t>(fold)]) {
            in_test[static_cast<std::size_t>(index)] = 1;
        }

        std::vector<int> train_rows;
        train_rows.reserve(static_cast<std::size_t>(x.rows));
        for (int r = 0; r < x.rows; ++r) {
            if (!in_test[static_cast<std::size_t>(r)]) train_rows.push_back(r);
        }

        Matrix train_x = Matrix::zeros(static_cast<int>(train_rows.size()), x.cols);
        std::vector<int> train_y(train_rows.size());
        bool has[2] = {false, false};
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            const int r = train_rows[i];
            for (int c = 0; c < x.cols; ++c) train_x.at(static_cast<int>(i), c) = x.at(r, c);
            train_y[i] = y[static_cast<std::size_t>(r)];
            if (train_y[i] >= 0 && train_y[i] < 2) has[train_y[i]] = true;
        }
        if (!has[0] || !has[1]) {
            raise(Errc::DegenerateDataset,
                  "training split of fold " + std::to_string(fold) + " holds a single class");
        }

        ForestParams fold_params = params;
        fold_params.seed = derive_seed(params.seed, static_cast<std::uint64_t>(fold));
        const ForestModel model = fit(train_x, train_y, fold_params, feature_names);

        FoldResult result;
        std::int64_t train_hits = 0;
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            if (predict(model, train_x.row(static_cast<int>(i))) == train_y[i]) ++train_hits;
        }
        result.train_accuracy =
            static_cast<double>(train_hits) / static_cast<double>(train_rows.size());

        for (int index : folds[static_cast<std::size_t>(fold)]) {
            const int predicted = predict(model, x.row(index));
            const int actual = y[static_cast<std::size_t>(index)];
            if (actual == 1) {
                (predicted == 1 ? result.counts.tp : result.counts.fn)++;
            } else {
                (predicted == 1 ? result.counts.fp : result.counts.tn)++;
            }
        }

        result.importances = feature_importance(model).values;
        for (std::size_t f = 0; f < result.importances.size(); ++f) {
            report.mean_importances[f] += result.importances[f];
        }
        report.pooled += result.counts;
        report.mean_train_accuracy += result.train_accuracy;
        report.fold_results.push_back(std::move(result));
    }

    for (double& v : report.mean_importances) v /= static_cast<double>(k);
    report.mean_train_accuracy /= static_cast<double>(k);
    report.grinding = compute_metrics(report.pooled);
    report.no_grinding = compute_metrics(report.pooled.swapped());
    report.pooled_accuracy = report.grinding.accuracy;
    if (report.feature_names.empty()) {
        for (int f = 0; f < x.cols; ++f) report.feature_names.push_back("f" + std::to_string(f));
    }
    return report;
}

namespace {

void write_class_metrics(std::ostream& out, const std::string& prefix, const Metrics& m) {
    out << prefix << ".precision " << format_double(m.precision) << '\n';
    out << prefix << ".recall " << format_double(m.recall) << '\n';
    out << prefix << ".f1 " << format_double(m.f1) << '\n';
}

}  // namespace

void write_report(std::ostream& out, const MetricsReport& report, const std::string& config_echo) {
    out << "bruxeval 1\n";
    out << "seed " << report.seed << '\n';
    out << "folds " << report.folds << '\n';
    out << "n_samples " << report.n_samples << '\n';
    out << "params.n_estimators " << report.params.n_estimators << '\n';
    out << "params.min_samples_split " << report.params.min_samples_split << '\n';
    out << "params.max_features ";
    switch (report.params.max_features_rule) {
        case MaxFeaturesRule::Sqrt: out << "sqrt"; break;
        case MaxFeaturesRule::All: out << "all"; break;
        case MaxFeaturesRule::Fixed: out << "fixed " << report.params.max_features_k; break;
    }
    out << '\n';
    if (report.params.max_depth < 0) {
        out << "params.max_depth none\n";
    } else {
        out << "params.max_depth " << report.params.max_depth << '\n';
    }
    out << "params.seed " << report.params.seed << '\n';
    out << "pooled.tp " << report.pooled.tp << '\n';
    out << "pooled.tn " << report.pooled.tn << '\n';
    out << "pooled.fp " << report.pooled.fp << '\n';
    out << "pooled.fn " << report.pooled.fn << '\n';
    out << "pooled.accuracy " << format_double(report.pooled_accuracy) << '\n';
    write_class_metrics(out, "class.grinding", report.grinding);
    write_class_metrics(out, "class.no_grinding", report.no_grinding);
    out << "train.mean_accuracy " << format_double(report.mean_train_accuracy) << '\n';
    for (std::size_t fold = 0; fold < report.fold_results.size(); ++fold) {
        const FoldResult& r = report.fold_results[fold];
        out << "fold." << fold << ".tp " << r.counts.tp << '\n';
        out << "fold." << fold << ".tn " << r.counts.tn << '\n';
        out << "fold." << fold << ".fp " << r.counts.fp << '\n';
        out << "fold." << fold << ".fn " << r.counts.fn << '\n';
        out << "fold." << fold << ".train_accuracy " << format_double(r.train_accuracy) << '\n';
    }
    for (std::size_t f = 0; f < report.mean_importances.size(); ++f) {
        out << "importance." << report.feature_names[f] << ' '
            << format_double(report.mean_importances[f]) << '\n';
    }
    if (!config_echo.empty()) {
        out << "config.begin\n" << config_echo;
        if (config_echo.back() != '\n') out << '\n';
        out << "config.end\n";
    }
}

void write_report_file(const std::string& path, const MetricsReport& report,
                       const std::string& config_echo) {
    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");
    write_report(out, report, config_echo);
    if (!out) raise(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace brux
