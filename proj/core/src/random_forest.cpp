#include "ids/random_forest.hpp"

#include "ids/error.hpp"
#include "ids/parallel.hpp"
#include "ids/rng.hpp"
#include "ids/version.hpp"

namespace ids {

RandomForest RandomForest::fit(const DataTable& table, const Hyperparams& hp,
                               std::uint64_t seed) {
    if (table.n_rows() == 0) throw DataError("cannot fit a forest on an empty table");
    hp.validate(table.n_features());

    RandomForest forest;
    forest.hyperparams_ = hp;
    forest.label_names_ = table.label_names();
    forest.n_classes_ = table.n_classes();
    forest.n_features_ = table.n_features();
    forest.trees_.resize(hp.n_estimators);

    const std::size_t n = table.n_rows();
    parallel_for(hp.n_estimators, [&](std::size_t t) {
        Rng boot(mix_seed(seed, seedstream::kTree, t, 0));
        std::vector<std::size_t> sample(n);
        for (std::size_t i = 0; i < n; ++i) sample[i] = boot.below(n);
        forest.trees_[t] = DecisionTree::fit(table.select_rows(sample), hp,
                                             mix_seed(seed, seedstream::kTree, t, 1));
    });
    return forest;
}

std::vector<double> RandomForest::predict_proba(std::span<const double> row) const {
    std::vector<double> mean(n_classes_, 0.0);
    for (const DecisionTree& tree : trees_) {
        const std::vector<double> p = tree.predict_proba(row);
        for (std::size_t c = 0; c < n_classes_; ++c) mean[c] += p[c];
    }
    for (double& v : mean) v /= static_cast<double>(trees_.size());
    return mean;
}

nlohmann::json RandomForest::to_json() const {
    nlohmann::json trees = nlohmann::json::array();
    for (const DecisionTree& tree : trees_) trees.push_back(tree.to_json());
    return {{"model_kind", model_kind()},  {"version", kVersion},
            {"label_names", label_names_}, {"n_features", n_features_},
            {"hyperparams", hyperparams_.to_json()}, {"trees", std::move(trees)}};
}

RandomForest RandomForest::from_json(const nlohmann::json& doc) {
    if (doc.value("model_kind", "") != "random_forest") {
        throw DataError("document is not a random_forest model");
    }
    RandomForest forest;
    forest.label_names_ = doc.at("label_names").get<std::vector<std::string>>();
    forest.n_classes_ = forest.label_names_.size();
    forest.n_features_ = doc.at("n_features").get<std::size_t>();
    forest.hyperparams_ = Hyperparams::from_json(doc.at("hyperparams"));
    for (const nlohmann::json& entry : doc.at("trees")) {
        forest.trees_.push_back(DecisionTree::from_json(entry));
    }
    if (forest.trees_.empty()) throw DataError("forest document has no trees");
    return forest;
}

}  // namespace ids
