#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "ids/classifier.hpp"
#include "ids/metrics.hpp"

namespace ids {

// Fits a fresh model on a training table; the seed is derived per
// (repeat, fold) so recipes stay deterministic under parallel evaluation.
using ModelRecipe =
    std::function<std::unique_ptr<Classifier>(const DataTable&, std::uint64_t)>;

struct CvOptions {
    // Refit the min-max scaler on each training fold and apply it to the
    // fold's test rows (the leak-free alternative to global scaling).
    bool scale_per_fold = false;
    AverageScheme scheme = AverageScheme::macro;
};

// Repeated stratified k-fold CV. Repeat r draws folds with seed + r; each
// repeat's fold confusion matrices are pooled, and the final report averages
// the repeats and carries the pooled matrices as per-repeat raw results.
Report cross_validate(const ModelRecipe& recipe, const DataTable& table, std::size_t k,
                      std::size_t repeats, std::uint64_t seed,
                      const CvOptions& options = {});

}  // namespace ids
