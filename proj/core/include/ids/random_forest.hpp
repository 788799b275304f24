#pragma once

#include <cstdint>
#include <vector>

#include "ids/decision_tree.hpp"

namespace ids {

// Bagged CART trees: each tree trains on a bootstrap resample (same size as
// the table, drawn with replacement) with per-node feature subsets of size
// max_features. Per-tree seeds derive from the master seed and tree index,
// so training is deterministic whether trees fit sequentially or in parallel.
class RandomForest final : public Classifier {
  public:
    static RandomForest fit(const DataTable& table, const Hyperparams& hp,
                            std::uint64_t seed);

    std::size_t n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return n_features_; }
    const std::vector<std::string>& label_names() const override {
        return label_names_;
    }

    std::vector<double> predict_proba(std::span<const double> row) const override;

    std::string model_kind() const override { return "random_forest"; }
    nlohmann::json to_json() const override;
    static RandomForest from_json(const nlohmann::json& doc);

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const Hyperparams& hyperparams() const { return hyperparams_; }

  private:
    std::vector<DecisionTree> trees_;
    Hyperparams hyperparams_;
    std::vector<std::string> label_names_;
    std::size_t n_classes_ = 0;
    std::size_t n_features_ = 0;
};

}  // namespace ids
