#include "brux/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "brux/errors.hpp"

namespace brux {

namespace {

std::vector<std::int64_t> class_histogram(std::span<const int> rows, std::span<const int> y,
                                          int n_classes) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (int r : rows) counts[static_cast<std::size_t>(y[static_cast<std::size_t>(r)])]++;
    return counts;
}

double gini_of(const std::vector<std::int64_t>& counts, std::int64_t total) {
    double sum_sq = 0.0;
    for (std::int64_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

int majority_class(const std::vector<std::int64_t>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;  // strict: ties keep the lower index
    }
    return static_cast<int>(best);
}

int subset_size(const ForestParams& params, int n_features) {
    switch (params.max_features_rule) {
        case MaxFeaturesRule::All:
            return n_features;
        case MaxFeaturesRule::Fixed:
            return std::clamp(params.max_features_k, 1, n_features);
        case MaxFeaturesRule::Sqrt:
        default:
            return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))));
    }
}

// k distinct feature indices via partial Fisher-Yates, returned sorted so the
// split search always scans features in ascending order.
std::vector<int> sample_features(int n_features, int k, SeededRng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(n_features));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + rng.uniform_int(n_features - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct TextWriter {
    std::ostringstream out;

    template <typename T>
    void line(const T& value) {
        out << value << '\n';
    }
};

[[noreturn]] void bad_model(const std::string& detail) {
    raise(Errc::SchemaMismatch, "model text: " + detail);
}

double parse_model_double(const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
        bad_model("'" + token + "' is not a number");
    }
    return v;
}

long long parse_model_int(const std::string& token) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (token.empty() || end != token.c_str() + token.size()) {
        bad_model("'" + token + "' is not an integer");
    }
    return v;
}

}  // namespace

double gini(std::span<const std::int64_t> class_counts) {
    if (class_counts.empty()) raise(Errc::EmptyNode, "gini of an empty class-count vector");
    std::int64_t total = 0;
    for (std::int64_t c : class_counts) {
        if (c < 0) raise(Errc::InvalidArgument, "negative class count");
        total += c;
    }
    if (total == 0) raise(Errc::EmptyNode, "gini of a node with zero samples");
    double sum_sq = 0.0;
    for (std::int64_t c : class_counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

std::optional<SplitCandidate> best_split(const Matrix& x, std::span<const int> rows,
                                         std::span<const int> y, std::span<const int> features,
                                         int n_classes) {
    if (features.empty()) raise(Errc::InvalidArgument, "empty feature subset");
    if (rows.empty()) raise(Errc::EmptyNode, "split requested for an empty node");

    const std::int64_t n = static_cast<std::int64_t>(rows.size());
    const auto parent_counts = class_histogram(rows, y, n_classes);
    const double parent_gini = gini_of(parent_counts, n);

    std::vector<int> ordered_features(features.begin(), features.end());
    std::sort(ordered_features.begin(), ordered_features.end());

    std::optional<SplitCandidate> best;
    std::vector<int> order(rows.begin(), rows.end());
    std::vector<std::int64_t> left_counts(static_cast<std::size_t>(n_classes));
    std::vector<std::int64_t> right_counts(static_cast<std::size_t>(n_classes));

    for (int f : ordered_features) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return x.at(a, f) < x.at(b, f);
        });
        std::fill(left_counts.begin(), left_counts.end(), 0);
        right_counts = parent_counts;

        for (std::int64_t i = 0; i + 1 < n; ++i) {
            const int row = order[static_cast<std::size_t>(i)];
            const auto cls = static_cast<std::size_t>(y[static_cast<std::size_t>(row)]);
            left_counts[cls]++;
            right_counts[cls]--;

            const double v = x.at(row, f);
            const double v_next = x.at(order[static_cast<std::size_t>(i + 1)], f);
            if (!(v < v_next)) continue;  // only between distinct values

            double threshold = 0.5 * (v + v_next);
            if (!(threshold < v_next)) threshold = v;  // adjacent doubles: keep v on the left

            const std::int64_t n_left = i + 1;
            const std::int64_t n_right = n - n_left;
            const double weighted =
                (static_cast<double>(n_left) * gini_of(left_counts, n_left) +
                 static_cast<double>(n_right) * gini_of(right_counts, n_right)) /
                static_cast<double>(n);
            const double gain = parent_gini - weighted;
            // Strict comparison: on equal gain the earlier candidate wins,
            // i.e. the lower feature index, then the lower threshold.
            if (gain > 0.0 && (!best || gain > best->gain)) {
                best = SplitCandidate{f, threshold, gain};
            }
        }
    }
    return best;
}

SeededRng tree_rng(std::uint64_t forest_seed, int tree_index) {
    return SeededRng(derive_seed(forest_seed, static_cast<std::uint64_t>(tree_index)));
}

std::vector<int> bootstrap_indices(int n, SeededRng& rng) {
    std::vector<int> indices(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = rng.uniform_int(n);
    return indices;
}

ForestModel fit(const Matrix& x, const std::vector<int>& y, const ForestParams& params,
                std::vector<std::string> feature_names) {
    if (x.rows != static_cast<int>(y.size())) {
        raise(Errc::DimensionMismatch, "labels and rows disagree");
    }
    if (x.rows < 2) raise(Errc::TooFewSamples, "training needs at least 2 rows");
    if (x.cols < 1) raise(Errc::InvalidArgument, "training needs at least 1 feature");
    if (params.n_estimators < 1) raise(Errc::InvalidArgument, "n_estimators must be >= 1");
    if (params.min_samples_split < 2) raise(Errc::InvalidArgument, "min_samples_split must be >= 2");

    int n_classes = 0;
    for (int label : y) {
        if (label < 0) raise(Errc::InvalidArgument, "class indices must be non-negative");
        n_classes = std::max(n_classes, label + 1);
    }
    {
        std::vector<std::int64_t> totals(static_cast<std::size_t>(n_classes), 0);
        for (int label : y) totals[static_cast<std::size_t>(label)]++;
        const auto present =
            std::count_if(totals.begin(), totals.end(), [](std::int64_t c) { return c > 0; });
        if (present < 2) raise(Errc::DegenerateDataset, "training data holds a single class");
    }

    if (feature_names.empty()) {
        for (int f = 0; f < x.cols; ++f) feature_names.push_back("f" + std::to_string(f));
    } else if (static_cast<int>(feature_names.size()) != x.cols) {
        raise(Errc::InvalidArgument, "feature_names width differs from the matrix");
    }

    ForestModel model;
    model.n_classes = n_classes;
    model.n_features = x.cols;
    model.feature_names = std::move(feature_names);
    model.params = params;
    model.n_training_samples = x.rows;
    model.trees.resize(static_cast<std::size_t>(params.n_estimators));

    const int k_features = subset_size(params, x.cols);

    for (int t = 0; t < params.n_estimators; ++t) {
        SeededRng rng = tree_rng(params.seed, t);
        const std::vector<int> rows = bootstrap_indices(x.rows, rng);
        Tree& tree = model.trees[static_cast<std::size_t>(t)];

        // Depth-first growth, left before right, so nodes land in pre-order.
        std::function<int(std::vector<int>, int)> grow = [&](std::vector<int> node_rows,
                                                             int depth) -> int {
            const int index = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            auto counts = class_histogram(node_rows, y, n_classes);
            tree.nodes[static_cast<std::size_t>(index)].class_counts = counts;

            const auto present =
                std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; });
            const bool depth_capped = params.max_depth >= 0 && depth >= params.max_depth;
            if (present <= 1 || static_cast<int>(node_rows.size()) < params.min_samples_split ||
                depth_capped) {
                return index;
            }

            const std::vector<int> features = sample_features(x.cols, k_features, rng);
            const auto split = best_split(x, node_rows, y, features, n_classes);
            if (!split) return index;

            std::vector<int> left_rows, right_rows;
            left_rows.reserve(node_rows.size());
            for (int r : node_rows) {
                if (x.at(r, split->feature_index) <= split->threshold) {
                    left_rows.push_back(r);
                } else {
                    right_rows.push_back(r);
                }
            }

            tree.nodes[static_cast<std::size_t>(index)].feature_index = split->feature_index;
            tree.nodes[static_cast<std::size_t>(index)].threshold = split->threshold;
            tree.nodes[static_cast<std::size_t>(index)].split_gain = split->gain;
            const int left = grow(std::move(left_rows), depth + 1);
            tree.nodes[static_cast<std::size_t>(index)].left = left;
            const int right = grow(std::move(right_rows), depth + 1);
            tree.nodes[static_cast<std::size_t>(index)].right = right;
            return index;
        };
        grow(rows, 0);
    }
    return model;
}

namespace {

int tree_vote(const Tree& tree, std::span<const double> x) {
    int index = 0;
    while (!tree.nodes[static_cast<std::size_t>(index)].is_leaf()) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        index = x[static_cast<std::size_t>(node.feature_index)] <= node.threshold ? node.left
                                                                                  : node.right;
    }
    return majority_class(tree.nodes[static_cast<std::size_t>(index)].class_counts);
}

}  // namespace

int predict(const ForestModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.n_features) {
        raise(Errc::DimensionMismatch, "vector of width " + std::to_string(x.size()) +
                                           " against a model trained on " +
                                           std::to_string(model.n_features) + " features");
    }
    if (model.trees.empty()) raise(Errc::InvalidArgument, "model holds no trees");
    std::vector<std::int64_t> votes(static_cast<std::size_t>(model.n_classes), 0);
    for (const Tree& tree : model.trees) votes[static_cast<std::size_t>(tree_vote(tree, x))]++;
    return majority_class(votes);
}

std::vector<int> predict(const ForestModel& model, const Matrix& x) {
    std::vector<int> out(static_cast<std::size_t>(x.rows));
    for (int r = 0; r < x.rows; ++r) out[static_cast<std::size_t>(r)] = predict(model, x.row(r));
    return out;
}

FeatureImportance feature_importance(const ForestModel& model) {
    FeatureImportance importance;
    importance.values.assign(static_cast<std::size_t>(model.n_features), 0.0);
    if (model.trees.empty()) {
        importance.no_splits = true;
        return importance;
    }

    for (const Tree& tree : model.trees) {
        if (tree.nodes.empty()) continue;
        std::int64_t root_total = 0;
        for (std::int64_t c : tree.nodes[0].class_counts) root_total += c;
        if (root_total == 0) continue;
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf()) continue;
            std::int64_t node_total = 0;
            for (std::int64_t c : node.class_counts) node_total += c;
            importance.values[static_cast<std::size_t>(node.feature_index)] +=
                static_cast<double>(node_total) / static_cast<double>(root_total) * node.split_gain;
        }
    }

    for (double& v : importance.values) v /= static_cast<double>(model.trees.size());
    const double total = std::accumulate(importance.values.begin(), importance.values.end(), 0.0);
    if (total > 0.0) {
        for (double& v : importance.values) v /= total;
    } else {
        std::fill(importance.values.begin(), importance.values.end(), 0.0);
        importance.no_splits = true;
    }
    return importance;
}

std::string model_to_text(const ForestModel& model) {
    std::ostringstream out;
    out << "bruxforest 1\n";
    out << "n_classes " << model.n_classes << '\n';
    out << "n_features " << model.n_features << '\n';
    out << "feature_names";
    for (const auto& name : model.feature_names) out << ' ' << name;
    out << '\n';
    out << "n_estimators " << model.params.n_estimators << '\n';
    out << "min_samples_split " << model.params.min_samples_split << '\n';
    out << "max_features ";
    switch (model.params.max_features_rule) {
        case MaxFeaturesRule::Sqrt: out << "sqrt"; break;
        case MaxFeaturesRule::All: out << "all"; break;
        case MaxFeaturesRule::Fixed: out << "fixed " << model.params.max_features_k; break;
    }
    out << '\n';
    if (model.params.max_depth < 0) {
        out << "max_depth none\n";
    } else {
        out << "max_depth " << model.params.max_depth << '\n';
    }
    out << "seed " << model.params.seed << '\n';
    out << "n_training_samples " << model.n_training_samples << '\n';
    out << "n_trees " << model.trees.size() << '\n';

    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        const Tree& tree = model.trees[t];
        out << "tree " << t << ' ' << tree.nodes.size() << '\n';
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf()) {
                out << "leaf";
            } else {
                out << "split " << node.feature_index << ' ' << format_double(node.threshold)
                    << ' ' << node.left << ' ' << node.right << ' ' << format_double(node.split_gain);
            }
            for (std::int64_t c : node.class_counts) out << ' ' << c;
            out << '\n';
        }
    }
    out << "end\n";
    return out.str();
}

void save_model(const std::string& path, const ForestModel& model) {
    std::ofstream out(path);
    if (!out) raise(Errc::IoError, "cannot open '" + path + "' for writing");
    out << model_to_text(model);
    if (!out) raise(Errc::IoError, "failed writing '" + path + "'");
}

ForestModel model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    auto next_line = [&](const char* what) -> std::string {
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        bad_model(std::string("unexpected end of text, expected ") + what);
    };
    auto tokens_of = [](const std::string& l) {
        std::istringstream ls(l);
        std::vector<std::string> tokens;
        std::string token;
        while (ls >> token) tokens.push_back(token);
        return tokens;
    };
    auto keyed_tokens = [&](const char* key, std::size_t min_count) {
        const auto tokens = tokens_of(next_line(key));
        if (tokens.empty() || tokens[0] != key || tokens.size() < 1 + min_count) {
            bad_model(std::string("expected '") + key + "' line");
        }
        return tokens;
    };

    {
        const auto header = tokens_of(next_line("header"));
        if (header.size() != 2 || header[0] != "bruxforest") bad_model("missing format tag");
        if (header[1] != "1") bad_model("unsupported format version " + header[1]);
    }

    ForestModel model;
    model.n_classes = static_cast<int>(parse_model_int(keyed_tokens("n_classes", 1)[1]));
    model.n_features = static_cast<int>(parse_model_int(keyed_tokens("n_features", 1)[1]));
    if (model.n_classes < 2 || model.n_features < 1) bad_model("degenerate shape");

    {
        const auto tokens = keyed_tokens("feature_names", 1);
        model.feature_names.assign(tokens.begin() + 1, tokens.end());
        if (static_cast<int>(model.feature_names.size()) != model.n_features) {
            bad_model("feature name count differs from n_features");
        }
    }

    model.params.n_estimators = static_cast<int>(parse_model_int(keyed_tokens("n_estimators", 1)[1]));
    model.params.min_samples_split =
        static_cast<int>(parse_model_int(keyed_tokens("min_samples_split", 1)[1]));
    {
        const auto tokens = keyed_tokens("max_features", 1);
        if (tokens[1] == "sqrt") {
            model.params.max_features_rule = MaxFeaturesRule::Sqrt;
        } else if (tokens[1] == "all") {
            model.params.max_features_rule = MaxFeaturesRule::All;
        } else if (tokens[1] == "fixed" && tokens.size() == 3) {
            model.params.max_features_rule = MaxFeaturesRule::Fixed;
            model.params.max_features_k = static_cast<int>(parse_model_int(tokens[2]));
        } else {
            bad_model("unknown max_features rule '" + tokens[1] + "'");
        }
    }
    {
        const auto tokens = keyed_tokens("max_depth", 1);
        model.params.max_depth =
            tokens[1] == "none" ? -1 : static_cast<int>(parse_model_int(tokens[1]));
    }
    model.params.seed = static_cast<std::uint64_t>(parse_model_int(keyed_tokens("seed", 1)[1]));
    model.n_training_samples =
        static_cast<int>(parse_model_int(keyed_tokens("n_training_samples", 1)[1]));

    const auto n_trees = parse_model_int(keyed_tokens("n_trees", 1)[1]);
    if (n_trees < 1) bad_model("model holds no trees");
    if (n_trees != model.params.n_estimators) {
        bad_model("n_trees differs from n_estimators");
    }

    model.trees.resize(static_cast<std::size_t>(n_trees));
    for (long long t = 0; t < n_trees; ++t) {
        const auto tree_header = keyed_tokens("tree", 2);
        if (parse_model_int(tree_header[1]) != t) bad_model("trees out of order");
        const auto n_nodes = parse_model_int(tree_header[2]);
        if (n_nodes < 1) bad_model("empty tree");

        Tree& tree = model.trees[static_cast<std::size_t>(t)];
        tree.nodes.resize(static_cast<std::size_t>(n_nodes));
        for (long long i = 0; i < n_nodes; ++i) {
            const auto tokens = tokens_of(next_line("node"));
            TreeNode& node = tree.nodes[static_cast<std::size_t>(i)];
            std::size_t count_start;
            if (!tokens.empty() && tokens[0] == "leaf") {
                count_start = 1;
            } else if (!tokens.empty() && tokens[0] == "split" && tokens.size() >= 6) {
                node.feature_index = static_cast<int>(parse_model_int(tokens[1]));
                node.threshold = parse_model_double(tokens[2]);
                node.left = static_cast<int>(parse_model_int(tokens[3]));
                node.right = static_cast<int>(parse_model_int(tokens[4]));
                node.split_gain = parse_model_double(tokens[5]);
                if (node.feature_index < 0 || node.feature_index >= model.n_features) {
                    bad_model("split feature index out of range");
                }
                if (node.left <= i || node.left >= n_nodes || node.right <= i ||
                    node.right >= n_nodes) {
                    bad_model("split child index out of range");
                }
                count_start = 6;
            } else {
                bad_model("unrecognized node line '" + (tokens.empty() ? "" : tokens[0]) + "'");
            }
            if (tokens.size() != count_start + static_cast<std::size_t>(model.n_classes)) {
                bad_model("node class-count width differs from n_classes");
            }
            for (int c = 0; c < model.n_classes; ++c) {
                node.class_counts.push_back(
                    parse_model_int(tokens[count_start + static_cast<std::size_t>(c)]));
            }
        }
    }

    if (tokens_of(next_line("end")) != std::vector<std::string>{"end"}) bad_model("missing end marker");
    return model;
}

ForestModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_text(buffer.str());
}

}  // namespace brux
