#include <benchmark/benchmark.h>

#include <vector>

#include "ids/cross_validation.hpp"
#include "ids/decision_tree.hpp"
#include "ids/folds.hpp"
#include "ids/ga_select.hpp"
#include "ids/metrics.hpp"
#include "ids/naive_bayes.hpp"
#include "ids/random_forest.hpp"
#include "ids/rng.hpp"

namespace {

// Gaussian blobs, one cluster per class, mildly overlapping.
ids::DataTable make_blobs(std::size_t n_rows, std::size_t n_features,
                          std::size_t n_classes, std::uint64_t seed) {
    ids::Rng rng(seed);
    std::vector<ids::ColumnMeta> columns;
    for (std::size_t f = 0; f < n_features; ++f) {
        columns.push_back({"f" + std::to_string(f), ids::ColumnKind::numeric, f});
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < n_classes; ++c) names.push_back("c" + std::to_string(c));

    std::vector<double> values(n_rows * n_features);
    std::vector<int> labels(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::size_t c = r % n_classes;
        labels[r] = static_cast<int>(c);
        for (std::size_t f = 0; f < n_features; ++f) {
            values[r * n_features + f] =
                static_cast<double>(c) + 0.8 * rng.normal();
        }
    }
    return ids::DataTable::from_parts(std::move(columns),
                                      {"label", ids::ColumnKind::label, n_features},
                                      std::move(values), std::move(labels),
                                      std::move(names));
}

void BM_NbFit(benchmark::State& state) {
    const ids::DataTable table =
        make_blobs(static_cast<std::size_t>(state.range(0)), 20, 4, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ids::GaussianNB::fit(table));
    }
}
BENCHMARK(BM_NbFit)->Arg(1000)->Arg(4000);

void BM_NbPredict(benchmark::State& state) {
    const ids::DataTable table = make_blobs(2000, 20, 4, 7);
    const ids::GaussianNB model = ids::GaussianNB::fit(table);
    std::size_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict(table.row(r)));
        r = (r + 1) % table.n_rows();
    }
}
BENCHMARK(BM_NbPredict);

void BM_DtFit(benchmark::State& state) {
    const ids::DataTable table =
        make_blobs(static_cast<std::size_t>(state.range(0)), 20, 4, 7);
    ids::Hyperparams hp;
    hp.min_samples_split = 8;
    hp.min_samples_leaf = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ids::DecisionTree::fit(table, hp, 11));
    }
}
BENCHMARK(BM_DtFit)->Arg(1000)->Arg(4000);

void BM_RfFit(benchmark::State& state) {
    const ids::DataTable table = make_blobs(1000, 20, 4, 7);
    ids::Hyperparams hp;
    hp.n_estimators = static_cast<std::size_t>(state.range(0));
    hp.max_depth = 80;
    hp.max_features = 2;
    hp.min_samples_split = 8;
    hp.min_samples_leaf = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ids::RandomForest::fit(table, hp, 13));
    }
}
BENCHMARK(BM_RfFit)->Arg(10)->Arg(50);

void BM_StratifiedKfold(benchmark::State& state) {
    const ids::DataTable table = make_blobs(10000, 5, 4, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ids::stratified_kfold(table.labels(), table.n_classes(), 10, 3));
    }
}
BENCHMARK(BM_StratifiedKfold);

void BM_ReportFromConfusion(benchmark::State& state) {
    ids::Rng rng(23);
    std::vector<int> y_true(50000), y_pred(50000);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        y_true[i] = static_cast<int>(rng.below(10));
        y_pred[i] = static_cast<int>(rng.below(10));
    }
    const ids::ConfusionMatrix cm = ids::confusion(y_true, y_pred, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ids::report_from_confusion(cm));
    }
}
BENCHMARK(BM_ReportFromConfusion);

void BM_GaFitness(benchmark::State& state) {
    const ids::DataTable table = make_blobs(1000, 20, 4, 7);
    ids::Chromosome chrom;
    chrom.bits.assign(20, 0);
    for (std::size_t i = 0; i < 20; i += 2) chrom.bits[i] = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ids::fitness(chrom, table, 5, 31));
    }
}
BENCHMARK(BM_GaFitness);

}  // namespace

BENCHMARK_MAIN();
