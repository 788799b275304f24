#include "ids/grid_search.hpp"

#include "ids/error.hpp"
#include "ids/parallel.hpp"

namespace ids {

std::size_t ParamGrid::size() const {
    if (values.empty()) throw ConfigError("grid has no parameters");
    std::size_t n = 1;
    for (const auto& [key, candidates] : values) {
        if (candidates.empty()) {
            throw ConfigError("grid parameter '" + key + "' has no candidate values");
        }
        n *= candidates.size();
    }
    return n;
}

namespace {

// Decodes a flat point index into one value per key; the last sorted key
// varies fastest, like the innermost of nested loops.
ParamPoint point_at(const ParamGrid& grid, std::size_t index) {
    ParamPoint point;
    for (auto it = grid.values.rbegin(); it != grid.values.rend(); ++it) {
        const std::vector<nlohmann::json>& candidates = it->second;
        point[it->first] = candidates[index % candidates.size()];
        index /= candidates.size();
    }
    return point;
}

}  // namespace

nlohmann::json GridSearchResult::to_json() const {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& [point, score] : scores) {
        all.push_back({{"params", point}, {"cv_accuracy", score}});
    }
    return {{"best_params", best_params},
            {"best_cv_accuracy", best_accuracy},
            {"scores", std::move(all)}};
}

GridSearchResult grid_search(const ParamGrid& grid, const RecipeFactory& factory,
                             const DataTable& table, std::size_t k, std::uint64_t seed,
                             const CvOptions& options) {
    const std::size_t n_points = grid.size();

    GridSearchResult result;
    result.scores.resize(n_points);
    parallel_for(n_points, [&](std::size_t i) {
        ParamPoint point = point_at(grid, i);
        const Report report =
            cross_validate(factory(point), table, k, 1, seed, options);
        result.scores[i] = {std::move(point), report.accuracy};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < n_points; ++i) {
        if (result.scores[i].second > result.scores[best].second) best = i;
    }
    result.best_params = result.scores[best].first;
    result.best_accuracy = result.scores[best].second;
    return result;
}

}  // namespace ids
