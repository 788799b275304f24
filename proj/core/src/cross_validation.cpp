#include "ids/cross_validation.hpp"

#include <utility>
#include <vector>

#include "ids/error.hpp"
#include "ids/folds.hpp"
#include "ids/parallel.hpp"
#include "ids/preprocess.hpp"
#include "ids/rng.hpp"

namespace ids {

Report cross_validate(const ModelRecipe& recipe, const DataTable& table, std::size_t k,
                      std::size_t repeats, std::uint64_t seed,
                      const CvOptions& options) {
    if (repeats < 1) throw ConfigError("cross-validation needs repeats >= 1");
    const std::size_t n_classes = table.n_classes();

    // Fold splits are cheap; draw them all up front so the expensive fits can
    // run over one flat (repeat, fold) index space.
    std::vector<std::vector<FoldSplit>> splits(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        splits[r] = stratified_kfold(table.labels(), n_classes, k, seed + r);
    }

    std::vector<ConfusionMatrix> fold_cms(repeats * k);
    parallel_for(repeats * k, [&](std::size_t slot) {
        const std::size_t r = slot / k;
        const std::size_t f = slot % k;
        const FoldSplit& fold = splits[r][f];
        DataTable train = table.select_rows(fold.train);
        DataTable test = table.select_rows(fold.test);
        if (options.scale_per_fold) {
            const ScalerParams params = fit_minmax(train);
            train = apply_minmax(train, params);
            test = apply_minmax(test, params);
        }
        const std::unique_ptr<Classifier> model =
            recipe(train, mix_seed(seed, seedstream::kCvFit, r, f));
        const std::vector<int> y_pred = predict_all(*model, test);
        fold_cms[slot] = confusion(test.labels(), y_pred, n_classes,
                                   table.label_names());
    });

    std::vector<Report> repeat_reports;
    repeat_reports.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        ConfusionMatrix pooled(n_classes, table.label_names());
        for (std::size_t f = 0; f < k; ++f) pooled += fold_cms[r * k + f];
        Report report = report_from_confusion(pooled, options.scheme);
        report.per_repeat.push_back(std::move(pooled));
        repeat_reports.push_back(std::move(report));
    }
    return aggregate(repeat_reports, options.scheme);
}

}  // namespace ids
