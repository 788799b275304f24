#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace ids {

// Tree and forest knobs, named after the conventional grid-search parameters.
// Unset max_depth means unlimited depth; unset max_features means every
// feature is examined at every split.
struct Hyperparams {
    std::size_t n_estimators = 100;
    std::optional<std::size_t> max_depth;
    std::optional<std::size_t> max_features;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::string criterion = "gini";

    // Throws ConfigError on out-of-range values; n_features bounds
    // max_features when known (pass 0 to skip that check).
    void validate(std::size_t n_features = 0) const;

    nlohmann::json to_json() const;
    static Hyperparams from_json(const nlohmann::json& doc);
};

}  // namespace ids
