#pragma once

#include <cstdint>
#include <vector>

#include "ids/classifier.hpp"
#include "ids/hyperparams.hpp"

namespace ids {

// Gini impurity 1 - sum((c_i / N)^2) over class counts. All-zero counts are
// an error (an empty node has no impurity).
double gini(std::span<const std::int64_t> class_counts);

struct TreeNode {
    // Internal nodes carry a split; leaves have split_feature == -1 and the
    // training class counts that reached them.
    int split_feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::int64_t> class_counts;

    bool is_leaf() const { return split_feature < 0; }
};

// Greedy CART with gini impurity. Candidate thresholds are midpoints between
// consecutive distinct sorted values; a node splits only when the best
// weighted child impurity strictly improves on its own and both children
// keep min_samples_leaf rows. When max_features is set below the feature
// count, each node examines a fresh uniform random subset of that size.
// Rows route left iff value <= threshold.
class DecisionTree final : public Classifier {
  public:
    static DecisionTree fit(const DataTable& table, const Hyperparams& hp,
                            std::uint64_t seed);

    std::size_t n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return n_features_; }
    const std::vector<std::string>& label_names() const override {
        return label_names_;
    }

    std::vector<double> predict_proba(std::span<const double> row) const override;
    int predict(std::span<const double> row) const override;

    std::string model_kind() const override { return "decision_tree"; }
    nlohmann::json to_json() const override;
    static DecisionTree from_json(const nlohmann::json& doc);

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;
    const Hyperparams& hyperparams() const { return hyperparams_; }

  private:
    const TreeNode& route(std::span<const double> row) const;

    std::vector<TreeNode> nodes_;  // nodes_[0] is the root
    Hyperparams hyperparams_;
    std::vector<std::string> label_names_;
    std::size_t n_classes_ = 0;
    std::size_t n_features_ = 0;
};

}  // namespace ids
