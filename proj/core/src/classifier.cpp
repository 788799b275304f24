#include "ids/classifier.hpp"

#include "ids/ensembles.hpp"
#include "ids/error.hpp"

namespace ids {

std::size_t argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw DataError("argmax of an empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

int Classifier::predict(std::span<const double> row) const {
    return static_cast<int>(argmax_lowest(predict_proba(row)));
}

std::vector<int> predict_all(const Classifier& model, const DataTable& table) {
    std::vector<int> out(table.n_rows());
    for (std::size_t r = 0; r < table.n_rows(); ++r) out[r] = model.predict(table.row(r));
    return out;
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& doc) {
    const std::string kind = doc.value("model_kind", "");
    if (kind == "gaussian_nb") {
        return std::make_unique<GaussianNB>(GaussianNB::from_json(doc));
    }
    if (kind == "decision_tree") {
        return std::make_unique<DecisionTree>(DecisionTree::from_json(doc));
    }
    if (kind == "random_forest") {
        return std::make_unique<RandomForest>(RandomForest::from_json(doc));
    }
    if (kind == "stacking") {
        return std::make_unique<StackingModel>(StackingModel::from_json(doc));
    }
    if (kind == "bagging") {
        return std::make_unique<BaggingModel>(BaggingModel::from_json(doc));
    }
    throw DataError("unknown model_kind '" + kind + "'");
}

}  // namespace ids
