#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "ids/ensembles.hpp"
#include "ids/error.hpp"
#include "ids/folds.hpp"
#include "ids/rng.hpp"
#include "test_util.hpp"

using ids::BaggingModel;
using ids::DataTable;
using ids::DecisionTree;
using ids::GaussianNB;
using ids::Hyperparams;
using ids::RandomForest;
using ids::StackingModel;
using test_util::make_blobs;
using test_util::ScopedEnv;

namespace {

Hyperparams small_rf() {
    Hyperparams hp;
    hp.n_estimators = 5;
    hp.max_depth = 5;
    hp.max_features = 2;
    return hp;
}

Hyperparams small_dt() {
    Hyperparams hp;
    hp.n_estimators = 1;
    hp.max_depth = 5;
    return hp;
}

}  // namespace

TEST_CASE("out-of-fold features have the stacked layout") {
    const DataTable table = make_blobs(30, 3, 4, 1.0, 0.5, 20);
    const auto oof = ids::stacking_oof_features(table, small_rf(), small_dt(), 3, 7);

    const std::size_t k = table.n_classes();
    CHECK(oof.meta_table.n_features() == 3 * k);
    CHECK(oof.meta_table.n_rows() == table.n_rows());
    CHECK(oof.fold_of.size() == table.n_rows());

    SUBCASE("columns name their base block") {
        const auto names = oof.meta_table.feature_names();
        CHECK(names[0] == "rf_p0");
        CHECK(names[k] == "dt_p0");
        CHECK(names[2 * k] == "nb_p0");
        CHECK(names[3 * k - 1] == "nb_p" + std::to_string(k - 1));
    }
    SUBCASE("each base block is a probability vector") {
        for (std::size_t r = 0; r < oof.meta_table.n_rows(); ++r) {
            for (std::size_t block = 0; block < 3; ++block) {
                double sum = 0.0;
                for (std::size_t c = 0; c < k; ++c) {
                    const double p = oof.meta_table.at(r, block * k + c);
                    CHECK(p >= 0.0);
                    CHECK(p <= 1.0);
                    sum += p;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
            }
        }
    }
    SUBCASE("labels are copied from the source table") {
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            CHECK(oof.meta_table.label(r) == table.label(r));
        }
        CHECK(oof.meta_table.label_names() == table.label_names());
    }
    SUBCASE("fold_of is a balanced stratified assignment") {
        std::vector<std::size_t> sizes(3, 0);
        for (std::size_t f : oof.fold_of) {
            REQUIRE(f < 3);
            ++sizes[f];
        }
        for (std::size_t s : sizes) CHECK(s == 30);  // 90 rows over 3 folds
    }
}

TEST_CASE("out-of-fold rows are scored by models that never saw them") {
    // Recompute the whole matrix independently: derive the same folds and
    // per-fold seeds, train the bases on each training split only, and
    // compare bitwise.
    const DataTable table = make_blobs(25, 2, 3, 1.1, 0.6, 33);
    const std::uint64_t seed = 91;
    const std::size_t oof_folds = 4;
    const auto oof =
        ids::stacking_oof_features(table, small_rf(), small_dt(), oof_folds, seed);

    const auto folds = ids::stratified_kfold(
        table.labels(), table.n_classes(), oof_folds,
        ids::mix_seed(seed, ids::seedstream::kStackFolds));
    const std::size_t k = table.n_classes();

    for (std::size_t f = 0; f < oof_folds; ++f) {
        const DataTable train = table.select_rows(folds[f].train);
        const RandomForest rf = RandomForest::fit(
            train, small_rf(), ids::mix_seed(seed, ids::seedstream::kStackBase, f, 0));
        const DecisionTree dt = DecisionTree::fit(
            train, small_dt(), ids::mix_seed(seed, ids::seedstream::kStackBase, f, 1));
        const GaussianNB nb = GaussianNB::fit(train);
        for (std::size_t r : folds[f].test) {
            CHECK(oof.fold_of[r] == f);
            const auto p_rf = rf.predict_proba(table.row(r));
            const auto p_dt = dt.predict_proba(table.row(r));
            const auto p_nb = nb.predict_proba(table.row(r));
            for (std::size_t c = 0; c < k; ++c) {
                CHECK(oof.meta_table.at(r, c) == p_rf[c]);
                CHECK(oof.meta_table.at(r, k + c) == p_dt[c]);
                CHECK(oof.meta_table.at(r, 2 * k + c) == p_nb[c]);
            }
        }
    }
}

TEST_CASE("stacking refits its bases on the full table") {
    const DataTable table = make_blobs(25, 3, 3, 1.0, 0.5, 14);
    const std::uint64_t seed = 55;
    const StackingModel model = StackingModel::fit(table, small_rf(), small_dt(), 3, seed);

    const RandomForest rf_full = RandomForest::fit(
        table, small_rf(), ids::mix_seed(seed, ids::seedstream::kStackFinal, 0));
    const DecisionTree dt_full = DecisionTree::fit(
        table, small_dt(), ids::mix_seed(seed, ids::seedstream::kStackFinal, 1));
    CHECK(model.base_rf().to_json() == rf_full.to_json());
    CHECK(model.base_dt().to_json() == dt_full.to_json());
    CHECK(model.base_nb().to_json() == GaussianNB::fit(table).to_json());

    SUBCASE("the meta forest is trained on the out-of-fold matrix") {
        const auto oof =
            ids::stacking_oof_features(table, small_rf(), small_dt(), 3, seed);
        const RandomForest meta = RandomForest::fit(
            oof.meta_table, small_rf(), ids::mix_seed(seed, ids::seedstream::kStackMeta));
        CHECK(model.meta().to_json() == meta.to_json());
        CHECK(model.meta().n_features() == 3 * table.n_classes());
    }
    SUBCASE("prediction chains bases into the meta forest") {
        ids::Rng rng(4);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> row(3);
            for (double& v : row) v = rng.uniform() * 2.5;
            std::vector<double> meta_row;
            for (const auto& p : {model.base_rf().predict_proba(row),
                                  model.base_dt().predict_proba(row),
                                  model.base_nb().predict_proba(row)}) {
                meta_row.insert(meta_row.end(), p.begin(), p.end());
            }
            const auto expected = model.meta().predict_proba(meta_row);
            const auto actual = model.predict_proba(row);
            for (std::size_t c = 0; c < table.n_classes(); ++c) {
                CHECK(actual[c] == expected[c]);
            }
        }
    }
}

TEST_CASE("stacking validates and stays deterministic") {
    const DataTable table = make_blobs(20, 2, 3, 1.2, 0.5, 2);
    CHECK_THROWS_AS(StackingModel::fit(table, small_rf(), small_dt(), 1, 3),
                    ids::ConfigError);

    nlohmann::json sequential, threaded;
    {
        ScopedEnv env("IDS_THREADS", "1");
        sequential = StackingModel::fit(table, small_rf(), small_dt(), 4, 3).to_json();
    }
    {
        ScopedEnv env("IDS_THREADS", "4");
        threaded = StackingModel::fit(table, small_rf(), small_dt(), 4, 3).to_json();
    }
    CHECK(sequential == threaded);

    SUBCASE("learns separated data") {
        const DataTable easy = make_blobs(30, 3, 3, 1.5, 0.3, 10);
        const StackingModel model = StackingModel::fit(easy, small_rf(), small_dt(), 3, 1);
        std::size_t correct = 0;
        for (std::size_t r = 0; r < easy.n_rows(); ++r) {
            correct += model.predict(easy.row(r)) == easy.label(r);
        }
        CHECK(double(correct) / double(easy.n_rows()) >= 0.9);
    }
}

TEST_CASE("stacking serialization keeps the base order explicit") {
    const DataTable table = make_blobs(20, 2, 3, 1.0, 0.5, 6);
    const StackingModel model = StackingModel::fit(table, small_rf(), small_dt(), 3, 9);
    const auto doc = model.to_json();
    CHECK(doc.at("model_kind") == "stacking");
    CHECK(doc.contains("version"));
    CHECK(doc.at("base_order") == nlohmann::json({"rf", "dt", "nb"}));
    CHECK(doc.at("oof_folds") == 3);

    const StackingModel back = StackingModel::from_json(doc);
    ids::Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> row(3);
        for (double& v : row) v = rng.uniform() * 2.0;
        const auto p1 = model.predict_proba(row);
        const auto p2 = back.predict_proba(row);
        for (std::size_t c = 0; c < 2; ++c) CHECK(p1[c] == p2[c]);
    }
}

TEST_CASE("a one-bag model equals its seeded forest on the bootstrap") {
    const DataTable table = make_blobs(30, 2, 3, 1.0, 0.5, 18);
    const std::uint64_t seed = 41;
    const BaggingModel model = BaggingModel::fit(table, small_rf(), 1, seed);
    REQUIRE(model.bags().size() == 1);

    ids::Rng boot(ids::mix_seed(seed, ids::seedstream::kBag, 0, 0));
    std::vector<std::size_t> sample(table.n_rows());
    for (std::size_t i = 0; i < sample.size(); ++i) sample[i] = boot.below(sample.size());
    const RandomForest lone =
        RandomForest::fit(table.select_rows(sample), small_rf(),
                          ids::mix_seed(seed, ids::seedstream::kBag, 0, 1));
    CHECK(model.bags()[0].to_json() == lone.to_json());
}

TEST_CASE("bagging averages bag probabilities") {
    const DataTable table = make_blobs(25, 3, 3, 1.1, 0.5, 26);
    const BaggingModel model = BaggingModel::fit(table, small_rf(), 4, 7);
    ids::Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> row(3);
        for (double& v : row) v = rng.uniform() * 2.5;
        std::vector<double> mean(3, 0.0);
        for (const RandomForest& bag : model.bags()) {
            const auto p = bag.predict_proba(row);
            for (std::size_t c = 0; c < 3; ++c) mean[c] += p[c];
        }
        for (double& v : mean) v /= 4.0;
        const auto proba = model.predict_proba(row);
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(proba[c] == doctest::Approx(mean[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("bagging validates, serializes, and stays deterministic") {
    const DataTable table = make_blobs(20, 2, 3, 1.0, 0.5, 3);
    CHECK_THROWS_AS(BaggingModel::fit(table, small_rf(), 0, 1), ids::ConfigError);

    const BaggingModel model = BaggingModel::fit(table, small_rf(), 3, 8);
    const auto doc = model.to_json();
    CHECK(doc.at("model_kind") == "bagging");
    CHECK(doc.at("n_bags") == 3);
    CHECK(doc.at("bags").size() == 3);

    const BaggingModel back = BaggingModel::from_json(doc);
    ids::Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> row(3);
        for (double& v : row) v = rng.uniform() * 2.0;
        const auto p1 = model.predict_proba(row);
        const auto p2 = back.predict_proba(row);
        for (std::size_t c = 0; c < 2; ++c) CHECK(p1[c] == p2[c]);
    }

    SUBCASE("a tampered bag count is rejected") {
        auto bad = doc;
        bad["n_bags"] = 5;
        CHECK_THROWS_AS(BaggingModel::from_json(bad), ids::DataError);
    }
    SUBCASE("thread count does not change the model") {
        nlohmann::json sequential, threaded;
        {
            ScopedEnv env("IDS_THREADS", "1");
            sequential = BaggingModel::fit(table, small_rf(), 3, 8).to_json();
        }
        {
            ScopedEnv env("IDS_THREADS", "4");
            threaded = BaggingModel::fit(table, small_rf(), 3, 8).to_json();
        }
        CHECK(sequential == threaded);
    }
}
