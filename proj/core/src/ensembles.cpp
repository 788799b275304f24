#include "ids/ensembles.hpp"

#include <algorithm>
#include <utility>

#include "ids/error.hpp"
#include "ids/folds.hpp"
#include "ids/parallel.hpp"
#include "ids/rng.hpp"
#include "ids/version.hpp"

namespace ids {

namespace {

// Column layout of the meta-feature matrix: RF block, DT block, NB block.
std::vector<ColumnMeta> meta_columns(std::size_t k) {
    std::vector<ColumnMeta> columns;
    const char* blocks[] = {"rf", "dt", "nb"};
    std::size_t index = 0;
    for (const char* block : blocks) {
        for (std::size_t c = 0; c < k; ++c) {
            columns.push_back({std::string(block) + "_p" + std::to_string(c),
                               ColumnKind::numeric, index++});
        }
    }
    return columns;
}

}  // namespace

OofFeatures stacking_oof_features(const DataTable& table, const Hyperparams& hp_rf,
                                  const Hyperparams& hp_dt, std::size_t oof_folds,
                                  std::uint64_t seed) {
    const std::size_t k = table.n_classes();
    const std::size_t n = table.n_rows();
    const std::vector<FoldSplit> folds = stratified_kfold(
        table.labels(), k, oof_folds, mix_seed(seed, seedstream::kStackFolds));

    std::vector<double> meta_values(n * 3 * k, 0.0);
    std::vector<std::size_t> fold_of(n, 0);
    parallel_for(folds.size(), [&](std::size_t f) {
        const DataTable train = table.select_rows(folds[f].train);
        const RandomForest rf =
            RandomForest::fit(train, hp_rf, mix_seed(seed, seedstream::kStackBase, f, 0));
        const DecisionTree dt =
            DecisionTree::fit(train, hp_dt, mix_seed(seed, seedstream::kStackBase, f, 1));
        const GaussianNB nb = GaussianNB::fit(train);
        for (std::size_t r : folds[f].test) {
            fold_of[r] = f;
            const std::vector<double> p_rf = rf.predict_proba(table.row(r));
            const std::vector<double> p_dt = dt.predict_proba(table.row(r));
            const std::vector<double> p_nb = nb.predict_proba(table.row(r));
            double* out = meta_values.data() + r * 3 * k;
            std::copy(p_rf.begin(), p_rf.end(), out);
            std::copy(p_dt.begin(), p_dt.end(), out + k);
            std::copy(p_nb.begin(), p_nb.end(), out + 2 * k);
        }
    });

    OofFeatures oof;
    oof.meta_table = DataTable::from_parts(
        meta_columns(k), {table.label_column().name, ColumnKind::label, 3 * k},
        std::move(meta_values), {table.labels().begin(), table.labels().end()},
        table.label_names());
    oof.fold_of = std::move(fold_of);
    return oof;
}

StackingModel StackingModel::fit(const DataTable& table, const Hyperparams& hp_rf,
                                 const Hyperparams& hp_dt, std::size_t oof_folds,
                                 std::uint64_t seed) {
    if (oof_folds < 2) throw ConfigError("stacking needs oof_folds >= 2");
    OofFeatures oof = stacking_oof_features(table, hp_rf, hp_dt, oof_folds, seed);

    StackingModel model;
    model.oof_folds_ = oof_folds;
    model.meta_ = RandomForest::fit(oof.meta_table, hp_rf,
                                    mix_seed(seed, seedstream::kStackMeta));
    model.rf_ = RandomForest::fit(table, hp_rf, mix_seed(seed, seedstream::kStackFinal, 0));
    model.dt_ = DecisionTree::fit(table, hp_dt, mix_seed(seed, seedstream::kStackFinal, 1));
    model.nb_ = GaussianNB::fit(table);
    return model;
}

std::vector<double> StackingModel::meta_row(std::span<const double> row) const {
    const std::size_t k = n_classes();
    std::vector<double> meta(3 * k);
    const std::vector<double> p_rf = rf_.predict_proba(row);
    const std::vector<double> p_dt = dt_.predict_proba(row);
    const std::vector<double> p_nb = nb_.predict_proba(row);
    std::copy(p_rf.begin(), p_rf.end(), meta.begin());
    std::copy(p_dt.begin(), p_dt.end(), meta.begin() + k);
    std::copy(p_nb.begin(), p_nb.end(), meta.begin() + 2 * k);
    return meta;
}

std::vector<double> StackingModel::predict_proba(std::span<const double> row) const {
    return meta_.predict_proba(meta_row(row));
}

nlohmann::json StackingModel::to_json() const {
    return {{"model_kind", model_kind()},
            {"version", kVersion},
            {"base_order", nlohmann::json::array({"rf", "dt", "nb"})},
            {"oof_folds", oof_folds_},
            {"bases",
             nlohmann::json::array({rf_.to_json(), dt_.to_json(), nb_.to_json()})},
            {"meta", meta_.to_json()}};
}

StackingModel StackingModel::from_json(const nlohmann::json& doc) {
    if (doc.value("model_kind", "") != "stacking") {
        throw DataError("document is not a stacking model");
    }
    const auto order = doc.at("base_order").get<std::vector<std::string>>();
    if (order != std::vector<std::string>{"rf", "dt", "nb"}) {
        throw DataError("stacking document has an unexpected base order");
    }
    StackingModel model;
    model.oof_folds_ = doc.at("oof_folds").get<std::size_t>();
    const nlohmann::json& bases = doc.at("bases");
    if (!bases.is_array() || bases.size() != 3) {
        throw DataError("stacking document must carry exactly three bases");
    }
    model.rf_ = RandomForest::from_json(bases[0]);
    model.dt_ = DecisionTree::from_json(bases[1]);
    model.nb_ = GaussianNB::from_json(bases[2]);
    model.meta_ = RandomForest::from_json(doc.at("meta"));
    return model;
}

BaggingModel BaggingModel::fit(const DataTable& table, const Hyperparams& hp_rf,
                               std::size_t n_bags, std::uint64_t seed) {
    if (n_bags < 1) throw ConfigError("bagging needs n_bags >= 1");
    if (table.n_rows() == 0) throw DataError("cannot fit bagging on an empty table");

    BaggingModel model;
    model.bags_.resize(n_bags);
    const std::size_t n = table.n_rows();
    parallel_for(n_bags, [&](std::size_t b) {
        Rng boot(mix_seed(seed, seedstream::kBag, b, 0));
        std::vector<std::size_t> sample(n);
        for (std::size_t i = 0; i < n; ++i) sample[i] = boot.below(n);
        model.bags_[b] = RandomForest::fit(table.select_rows(sample), hp_rf,
                                           mix_seed(seed, seedstream::kBag, b, 1));
    });
    return model;
}

std::vector<double> BaggingModel::predict_proba(std::span<const double> row) const {
    std::vector<double> mean(n_classes(), 0.0);
    for (const RandomForest& bag : bags_) {
        const std::vector<double> p = bag.predict_proba(row);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += p[c];
    }
    for (double& v : mean) v /= static_cast<double>(bags_.size());
    return mean;
}

nlohmann::json BaggingModel::to_json() const {
    nlohmann::json bags = nlohmann::json::array();
    for (const RandomForest& bag : bags_) bags.push_back(bag.to_json());
    return {{"model_kind", model_kind()},
            {"version", kVersion},
            {"n_bags", bags_.size()},
            {"bags", std::move(bags)}};
}

BaggingModel BaggingModel::from_json(const nlohmann::json& doc) {
    if (doc.value("model_kind", "") != "bagging") {
        throw DataError("document is not a bagging model");
    }
    BaggingModel model;
    for (const nlohmann::json& entry : doc.at("bags")) {
        model.bags_.push_back(RandomForest::from_json(entry));
    }
    if (model.bags_.empty()) throw DataError("bagging document has no bags");
    if (doc.at("n_bags").get<std::size_t>() != model.bags_.size()) {
        throw DataError("bagging document n_bags disagrees with its bag list");
    }
    return model;
}

}  // namespace ids
