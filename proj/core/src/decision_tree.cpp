#include "ids/decision_tree.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "ids/error.hpp"
#include "ids/rng.hpp"
#include "ids/version.hpp"

namespace ids {

double gini(std::span<const std::int64_t> class_counts) {
    std::int64_t n = 0;
    for (std::int64_t c : class_counts) {
        if (c < 0) throw DataError("negative class count");
        n += c;
    }
    if (n == 0) throw DataError("gini of an empty node is undefined");
    double sum_sq = 0.0;
    for (std::int64_t c : class_counts) {
        const double p = static_cast<double>(c) / static_cast<double>(n);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct BuildTask {
    std::vector<std::size_t> rows;
    std::size_t node = 0;
    std::size_t depth = 0;
};

struct BestSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

std::vector<std::int64_t> count_classes(const DataTable& table,
                                        std::span<const std::size_t> rows,
                                        std::size_t k) {
    std::vector<std::int64_t> counts(k, 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(table.label(r))];
    return counts;
}

// Scans one feature's sorted values for the impurity-minimizing boundary.
void scan_feature(const DataTable& table, std::span<const std::size_t> rows,
                  std::size_t feature, std::size_t k, std::size_t min_samples_leaf,
                  const std::vector<std::int64_t>& total_counts, BestSplit& best) {
    std::vector<std::pair<double, int>> cells;
    cells.reserve(rows.size());
    for (std::size_t r : rows) cells.emplace_back(table.at(r, feature), table.label(r));
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double n = static_cast<double>(cells.size());
    std::vector<std::int64_t> left(k, 0);
    std::vector<std::int64_t> right = total_counts;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>(cells[i].second);
        ++left[c];
        --right[c];
        if (cells[i].first == cells[i + 1].first) continue;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = cells.size() - left_n;
        if (left_n < min_samples_leaf || right_n < min_samples_leaf) continue;
        const double weighted = (static_cast<double>(left_n) * gini(left) +
                                 static_cast<double>(right_n) * gini(right)) /
                                n;
        if (!best.found || weighted < best.weighted_gini) {
            const double lo = cells[i].first;
            const double hi = cells[i + 1].first;
            double mid = lo + (hi - lo) / 2.0;
            // Keep the boundary strictly below hi so "<= threshold" routes
            // exactly the counted prefix left even when the midpoint rounds up.
            if (mid >= hi) mid = lo;
            best.found = true;
            best.feature = feature;
            best.threshold = mid;
            best.weighted_gini = weighted;
        }
    }
}

}  // namespace

DecisionTree DecisionTree::fit(const DataTable& table, const Hyperparams& hp,
                               std::uint64_t seed) {
    if (table.n_rows() == 0) throw DataError("cannot fit a tree on an empty table");
    hp.validate(table.n_features());

    DecisionTree tree;
    tree.hyperparams_ = hp;
    tree.label_names_ = table.label_names();
    tree.n_classes_ = table.n_classes();
    tree.n_features_ = table.n_features();

    const std::size_t d = table.n_features();
    const std::size_t m = hp.max_features.has_value() ? std::min(*hp.max_features, d) : d;
    Rng rng(seed);
    std::vector<std::size_t> all_features(d);
    std::iota(all_features.begin(), all_features.end(), 0);

    std::vector<BuildTask> stack;
    tree.nodes_.emplace_back();
    {
        BuildTask root;
        root.rows.resize(table.n_rows());
        std::iota(root.rows.begin(), root.rows.end(), 0);
        stack.push_back(std::move(root));
    }

    while (!stack.empty()) {
        BuildTask task = std::move(stack.back());
        stack.pop_back();
        std::vector<std::int64_t> counts = count_classes(table, task.rows, tree.n_classes_);
        const double node_gini = gini(counts);

        const bool depth_capped =
            hp.max_depth.has_value() && task.depth >= *hp.max_depth;
        BestSplit best;
        if (node_gini > 0.0 && task.rows.size() >= hp.min_samples_split &&
            !depth_capped) {
            std::vector<std::size_t> candidates = all_features;
            if (m < d) {
                rng.shuffle(candidates);
                candidates.resize(m);
                std::sort(candidates.begin(), candidates.end());
            }
            for (std::size_t f : candidates) {
                scan_feature(table, task.rows, f, tree.n_classes_, hp.min_samples_leaf,
                             counts, best);
            }
        }

        if (!best.found || best.weighted_gini >= node_gini) {
            tree.nodes_[task.node].split_feature = -1;
            tree.nodes_[task.node].class_counts = std::move(counts);
            continue;
        }

        BuildTask left_task, right_task;
        left_task.depth = right_task.depth = task.depth + 1;
        for (std::size_t r : task.rows) {
            (table.at(r, best.feature) <= best.threshold ? left_task.rows
                                                         : right_task.rows)
                .push_back(r);
        }
        const int left_index = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        tree.nodes_.emplace_back();
        TreeNode& node = tree.nodes_[task.node];
        node.split_feature = static_cast<int>(best.feature);
        node.threshold = best.threshold;
        node.left = left_index;
        node.right = left_index + 1;
        left_task.node = static_cast<std::size_t>(left_index);
        right_task.node = static_cast<std::size_t>(left_index + 1);
        // Push right first so the left child is processed (and draws any
        // feature-subset randomness) before its sibling.
        stack.push_back(std::move(right_task));
        stack.push_back(std::move(left_task));
    }
    return tree;
}

const TreeNode& DecisionTree::route(std::span<const double> row) const {
    if (row.size() != n_features_) {
        throw DataError("row has " + std::to_string(row.size()) + " features, model has " +
                        std::to_string(n_features_));
    }
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf()) {
        const double v = row[static_cast<std::size_t>(node->split_feature)];
        node = &nodes_[static_cast<std::size_t>(v <= node->threshold ? node->left
                                                                     : node->right)];
    }
    return *node;
}

std::vector<double> DecisionTree::predict_proba(std::span<const double> row) const {
    const TreeNode& leaf = route(row);
    std::int64_t n = 0;
    for (std::int64_t c : leaf.class_counts) n += c;
    std::vector<double> proba(n_classes_, 0.0);
    for (std::size_t c = 0; c < n_classes_; ++c) {
        proba[c] = static_cast<double>(leaf.class_counts[c]) / static_cast<double>(n);
    }
    return proba;
}

int DecisionTree::predict(std::span<const double> row) const {
    const TreeNode& leaf = route(row);
    std::size_t best = 0;
    for (std::size_t c = 1; c < leaf.class_counts.size(); ++c) {
        if (leaf.class_counts[c] > leaf.class_counts[best]) best = c;
    }
    return static_cast<int>(best);
}

std::size_t DecisionTree::depth() const {
    std::size_t max_depth = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [index, depth] = stack.back();
        stack.pop_back();
        max_depth = std::max(max_depth, depth);
        const TreeNode& node = nodes_[index];
        if (!node.is_leaf()) {
            stack.push_back({static_cast<std::size_t>(node.left), depth + 1});
            stack.push_back({static_cast<std::size_t>(node.right), depth + 1});
        }
    }
    return max_depth;
}

nlohmann::json DecisionTree::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : nodes_) {
        if (node.is_leaf()) {
            nodes.push_back({{"counts", node.class_counts}});
        } else {
            nodes.push_back({{"feature", node.split_feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right}});
        }
    }
    return {{"model_kind", model_kind()},     {"version", kVersion},
            {"label_names", label_names_},    {"n_features", n_features_},
            {"hyperparams", hyperparams_.to_json()}, {"nodes", std::move(nodes)}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
    if (doc.value("model_kind", "") != "decision_tree") {
        throw DataError("document is not a decision_tree model");
    }
    DecisionTree tree;
    tree.label_names_ = doc.at("label_names").get<std::vector<std::string>>();
    tree.n_classes_ = tree.label_names_.size();
    tree.n_features_ = doc.at("n_features").get<std::size_t>();
    tree.hyperparams_ = Hyperparams::from_json(doc.at("hyperparams"));
    for (const nlohmann::json& entry : doc.at("nodes")) {
        TreeNode node;
        if (entry.contains("counts")) {
            node.class_counts = entry["counts"].get<std::vector<std::int64_t>>();
            if (node.class_counts.size() != tree.n_classes_) {
                throw DataError("leaf counts disagree with the class count");
            }
        } else {
            node.split_feature = entry.at("feature").get<int>();
            node.threshold = entry.at("threshold").get<double>();
            node.left = entry.at("left").get<int>();
            node.right = entry.at("right").get<int>();
            const int n = static_cast<int>(doc.at("nodes").size());
            if (node.split_feature < 0 ||
                static_cast<std::size_t>(node.split_feature) >= tree.n_features_ ||
                node.left < 0 || node.left >= n || node.right < 0 || node.right >= n) {
                throw DataError("tree node references are out of range");
            }
        }
        tree.nodes_.push_back(std::move(node));
    }
    if (tree.nodes_.empty()) throw DataError("tree document has no nodes");
    return tree;
}

}  // namespace ids
