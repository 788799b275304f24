#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/cross_validation.hpp"

namespace ids {

// Named parameter -> nonempty candidate list. std::map keeps the enumeration
// order canonical (sorted keys, value lists in the given order).
struct ParamGrid {
    std::map<std::string, std::vector<nlohmann::json>> values;

    // Number of points in the Cartesian product.
    std::size_t size() const;
};

using ParamPoint = std::map<std::string, nlohmann::json>;

// Builds the model recipe for one grid point.
using RecipeFactory = std::function<ModelRecipe(const ParamPoint&)>;

struct GridSearchResult {
    ParamPoint best_params;
    double best_accuracy = 0.0;
    // Every point with its CV accuracy, in enumeration order.
    std::vector<std::pair<ParamPoint, double>> scores;

    nlohmann::json to_json() const;
};

// Exhaustive search: every point is scored by k-fold CV accuracy on the same
// fold split, and ties keep the earliest point in enumeration order.
GridSearchResult grid_search(const ParamGrid& grid, const RecipeFactory& factory,
                             const DataTable& table, std::size_t k, std::uint64_t seed,
                             const CvOptions& options = {});

}  // namespace ids
