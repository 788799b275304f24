#pragma once

#include <cstdint>
#include <vector>

#include "ids/decision_tree.hpp"
#include "ids/naive_bayes.hpp"
#include "ids/random_forest.hpp"

namespace ids {

// Out-of-fold meta-feature matrix for stacking: each row's 3K columns are
// the class probabilities of RF, DT and NB models (in that fixed order)
// trained on folds that exclude the row. fold_of records the fold each row
// was held out in, so the out-of-fold discipline is checkable.
struct OofFeatures {
    DataTable meta_table;  // n_rows x 3K, labels copied from the source
    std::vector<std::size_t> fold_of;
};

OofFeatures stacking_oof_features(const DataTable& table, const Hyperparams& hp_rf,
                                  const Hyperparams& hp_dt, std::size_t oof_folds,
                                  std::uint64_t seed);

// Two-level stacking: level 0 is the fixed base trio (RF, DT, NB), level 1 an
// RF fit on their out-of-fold class probabilities. After the meta model is
// trained the bases are refit on the full table for prediction time.
class StackingModel final : public Classifier {
  public:
    static StackingModel fit(const DataTable& table, const Hyperparams& hp_rf,
                             const Hyperparams& hp_dt, std::size_t oof_folds,
                             std::uint64_t seed);

    std::size_t n_classes() const override { return rf_.n_classes(); }
    std::size_t n_features() const override { return rf_.n_features(); }
    const std::vector<std::string>& label_names() const override {
        return rf_.label_names();
    }

    std::vector<double> predict_proba(std::span<const double> row) const override;

    std::string model_kind() const override { return "stacking"; }
    nlohmann::json to_json() const override;
    static StackingModel from_json(const nlohmann::json& doc);

    const RandomForest& base_rf() const { return rf_; }
    const DecisionTree& base_dt() const { return dt_; }
    const GaussianNB& base_nb() const { return nb_; }
    const RandomForest& meta() const { return meta_; }
    std::size_t oof_folds() const { return oof_folds_; }

  private:
    std::vector<double> meta_row(std::span<const double> row) const;

    RandomForest rf_;
    DecisionTree dt_;
    GaussianNB nb_;
    RandomForest meta_;
    std::size_t oof_folds_ = 0;
};

// Bags of random forests: each bag is an RF fit on a bootstrap resample of
// the table; prediction averages the bags' probability vectors.
class BaggingModel final : public Classifier {
  public:
    static BaggingModel fit(const DataTable& table, const Hyperparams& hp_rf,
                            std::size_t n_bags, std::uint64_t seed);

    std::size_t n_classes() const override { return bags_.front().n_classes(); }
    std::size_t n_features() const override { return bags_.front().n_features(); }
    const std::vector<std::string>& label_names() const override {
        return bags_.front().label_names();
    }

    std::vector<double> predict_proba(std::span<const double> row) const override;

    std::string model_kind() const override { return "bagging"; }
    nlohmann::json to_json() const override;
    static BaggingModel from_json(const nlohmann::json& doc);

    const std::vector<RandomForest>& bags() const { return bags_; }

  private:
    std::vector<RandomForest> bags_;
};

}  // namespace ids
