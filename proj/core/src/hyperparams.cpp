#include "ids/hyperparams.hpp"

#include "ids/error.hpp"

namespace ids {

void Hyperparams::validate(std::size_t n_features) const {
    if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
    if (max_depth.has_value() && *max_depth < 1) {
        throw ConfigError("max_depth must be >= 1 when set");
    }
    if (max_features.has_value()) {
        if (*max_features < 1) throw ConfigError("max_features must be >= 1 when set");
        if (n_features > 0 && *max_features > n_features) {
            throw ConfigError("max_features " + std::to_string(*max_features) +
                              " exceeds feature count " + std::to_string(n_features));
        }
    }
    if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
    if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    if (criterion != "gini") {
        throw ConfigError("unsupported criterion '" + criterion + "' (only gini)");
    }
}

nlohmann::json Hyperparams::to_json() const {
    nlohmann::json doc = {{"n_estimators", n_estimators},
                          {"min_samples_split", min_samples_split},
                          {"min_samples_leaf", min_samples_leaf},
                          {"criterion", criterion}};
    doc["max_depth"] = max_depth.has_value() ? nlohmann::json(*max_depth)
                                             : nlohmann::json(nullptr);
    doc["max_features"] = max_features.has_value() ? nlohmann::json(*max_features)
                                                   : nlohmann::json(nullptr);
    return doc;
}

Hyperparams Hyperparams::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("hyperparams must be a JSON object");
    Hyperparams hp;
    for (const auto& [key, value] : doc.items()) {
        if (key == "n_estimators") {
            hp.n_estimators = value.get<std::size_t>();
        } else if (key == "max_depth") {
            if (!value.is_null()) hp.max_depth = value.get<std::size_t>();
        } else if (key == "max_features") {
            if (!value.is_null()) hp.max_features = value.get<std::size_t>();
        } else if (key == "min_samples_split") {
            hp.min_samples_split = value.get<std::size_t>();
        } else if (key == "min_samples_leaf") {
            hp.min_samples_leaf = value.get<std::size_t>();
        } else if (key == "criterion") {
            hp.criterion = value.get<std::string>();
        } else {
            throw ConfigError("unknown hyperparameter '" + key + "'");
        }
    }
    hp.validate();
    return hp;
}

}  // namespace ids
