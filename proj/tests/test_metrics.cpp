#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "ids/error.hpp"
#include "ids/metrics.hpp"
#include "ids/rng.hpp"

using ids::AverageScheme;
using ids::BinaryCounts;
using ids::confusion;
using ids::ConfusionMatrix;
using ids::DataError;
using ids::one_vs_rest;
using ids::Report;

namespace {

// Brute-force one-vs-rest counting straight off the label vectors; the
// oracle shares no code with the library computation.
struct OracleCounts {
    long tp = 0, fp = 0, fn = 0, tn = 0;
};

OracleCounts count_binary(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred, int positive) {
    OracleCounts o;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == positive;
        const bool predicted = y_pred[i] == positive;
        if (actual && predicted) ++o.tp;
        if (!actual && predicted) ++o.fp;
        if (actual && !predicted) ++o.fn;
        if (!actual && !predicted) ++o.tn;
    }
    return o;
}

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

TEST_CASE("hand-checked two-class example") {
    // Confusion matrix [[1,1],[0,2]]: one class-0 row correct, one predicted
    // as class 1; both class-1 rows correct.
    const std::vector<int> y_true{0, 0, 1, 1};
    const std::vector<int> y_pred{0, 1, 1, 1};
    const ConfusionMatrix cm = confusion(y_true, y_pred, 2, {"normal", "attack"});

    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(0, 1) == 1);
    CHECK(cm.at(1, 0) == 0);
    CHECK(cm.at(1, 1) == 2);
    CHECK(cm.total() == 4);
    CHECK(cm.trace() == 3);
    CHECK(cm.support(0) == 2);
    CHECK(cm.support(1) == 2);

    CHECK(ids::accuracy(cm) == doctest::Approx(0.75));

    const BinaryCounts b = one_vs_rest(cm, 1);
    CHECK(b.tp == 2);
    CHECK(b.fn == 0);
    CHECK(b.fp == 1);
    CHECK(b.tn == 1);
    CHECK(ids::recall(b) == 1.0);
    CHECK(ids::precision(b) == doctest::Approx(2.0 / 3.0));
    CHECK(ids::f1(ids::precision(b), ids::recall(b)) == doctest::Approx(0.8));
    CHECK(ids::far(b) == 0.0);
    CHECK(ids::dr(b) == 100.0);
    CHECK(ids::fpr(b) == doctest::Approx(0.5));
}

TEST_CASE("all metrics match a brute-force oracle on random data") {
    ids::Rng rng(2024);
    const std::size_t k = 4, n = 50;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> y_true(n), y_pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_true[i] = static_cast<int>(rng.below(k));
            y_pred[i] = static_cast<int>(rng.below(k));
        }
        const ConfusionMatrix cm = confusion(y_true, y_pred, k);

        long correct = 0;
        for (std::size_t i = 0; i < n; ++i) correct += y_true[i] == y_pred[i];
        CHECK(ids::accuracy(cm) ==
              doctest::Approx(double(correct) / double(n)).epsilon(1e-12));

        for (std::size_t c = 0; c < k; ++c) {
            const OracleCounts o = count_binary(y_true, y_pred, (int)c);
            const BinaryCounts b = one_vs_rest(cm, c);
            CHECK(b.tp == o.tp);
            CHECK(b.fp == o.fp);
            CHECK(b.fn == o.fn);
            CHECK(b.tn == o.tn);
            CHECK(b.tp + b.fp + b.fn + b.tn == (std::int64_t)n);

            const double pr = safe_div(double(o.tp), double(o.tp + o.fp));
            const double rc = safe_div(double(o.tp), double(o.tp + o.fn));
            const double f1v = safe_div(2.0 * pr * rc, pr + rc);
            const double farv = safe_div(double(o.fn), double(o.fn + o.tp));
            const double fprv = safe_div(double(o.fp), double(o.fp + o.tn));
            CHECK(ids::precision(b) == doctest::Approx(pr).epsilon(1e-12));
            CHECK(ids::recall(b) == doctest::Approx(rc).epsilon(1e-12));
            CHECK(ids::f1(ids::precision(b), ids::recall(b)) ==
                  doctest::Approx(f1v).epsilon(1e-12));
            CHECK(ids::far(b) == doctest::Approx(farv).epsilon(1e-12));
            CHECK(ids::dr(b) == doctest::Approx(100.0 * rc).epsilon(1e-12));
            CHECK(ids::fpr(b) == doctest::Approx(fprv).epsilon(1e-12));
        }
    }
}

TEST_CASE("identities hold exactly on random counts") {
    ids::Rng rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        BinaryCounts b;
        b.tp = static_cast<std::int64_t>(rng.below(1000));
        b.fp = static_cast<std::int64_t>(rng.below(1000));
        b.fn = static_cast<std::int64_t>(rng.below(1000));
        b.tn = static_cast<std::int64_t>(rng.below(1000));
        if (b.tp + b.fn == 0) b.tp = 1;
        // Bitwise-exact complements, not approximate ones.
        CHECK(ids::far(b) + ids::recall(b) == 1.0);
        CHECK(ids::dr(b) == 100.0 * ids::recall(b));
    }
}

TEST_CASE("zero denominators yield zero and raise the degenerate flag") {
    SUBCASE("empty positive class") {
        const BinaryCounts b{0, 2, 0, 8};
        bool degenerate = false;
        CHECK(ids::recall(b, &degenerate) == 0.0);
        CHECK(degenerate);
        degenerate = false;
        CHECK(ids::far(b, &degenerate) == 0.0);
        CHECK(degenerate);
        degenerate = false;
        CHECK(ids::dr(b, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("nothing predicted positive") {
        const BinaryCounts b{0, 0, 5, 5};
        bool degenerate = false;
        CHECK(ids::precision(b, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("precision and recall both zero") {
        bool degenerate = false;
        CHECK(ids::f1(0.0, 0.0, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("empty matrix accuracy") {
        const ConfusionMatrix cm(2);
        bool degenerate = false;
        CHECK(ids::accuracy(cm, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("no negatives") {
        const BinaryCounts b{5, 0, 5, 0};
        bool degenerate = false;
        CHECK(ids::fpr(b, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("flag untouched when defined") {
        const BinaryCounts b{5, 1, 2, 2};
        bool degenerate = false;
        ids::recall(b, &degenerate);
        ids::precision(b, &degenerate);
        ids::far(b, &degenerate);
        ids::fpr(b, &degenerate);
        CHECK_FALSE(degenerate);
    }
}

TEST_CASE("confusion matrix plumbing") {
    SUBCASE("input validation") {
        const std::vector<int> two{0, 1}, one{0}, oob{0, 2}, neg{0, -1};
        CHECK_THROWS_AS(confusion(two, one, 2), DataError);
        CHECK_THROWS_AS(confusion(oob, two, 2), DataError);
        CHECK_THROWS_AS(confusion(neg, two, 2), DataError);
    }
    SUBCASE("pooling adds counts") {
        const std::vector<int> t{0, 1}, p1{0, 1}, p2{1, 1};
        ConfusionMatrix a = confusion(t, p1, 2);
        const ConfusionMatrix b = confusion(t, p2, 2);
        a += b;
        CHECK(a.at(0, 0) == 1);
        CHECK(a.at(0, 1) == 1);
        CHECK(a.at(1, 1) == 2);
        CHECK(a.total() == 4);
    }
    SUBCASE("pooling rejects mismatched sizes") {
        ConfusionMatrix a(2), b(3);
        CHECK_THROWS_AS(a += b, DataError);
    }
    SUBCASE("JSON round trip") {
        const std::vector<int> t{0, 1, 2, 2}, p{0, 2, 2, 1};
        const ConfusionMatrix cm = confusion(t, p, 3, {"x", "y", "z"});
        const auto doc = cm.to_json();
        REQUIRE(doc.contains("labels"));
        REQUIRE(doc.contains("counts"));
        const ConfusionMatrix back = ConfusionMatrix::from_json(doc);
        CHECK(back.n_classes() == 3);
        CHECK(back.label_names() == cm.label_names());
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) CHECK(back.at(i, j) == cm.at(i, j));
        }
    }
}

TEST_CASE("weighted recall equals pooled accuracy") {
    // Identity: sum_c support_c * recall_c / total == trace / total.
    ids::Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 3, n = 60;
        std::vector<int> y_true(n), y_pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_true[i] = static_cast<int>(rng.below(k));
            y_pred[i] = static_cast<int>(rng.below(k));
        }
        const Report report =
            ids::report_from_confusion(confusion(y_true, y_pred, k));
        CHECK(report.weighted_avg.recall ==
              doctest::Approx(report.accuracy).epsilon(1e-12));
    }
}

TEST_CASE("report averaging schemes") {
    // Class 0: 10 rows all correct. Class 1: 30 rows, 18 correct, 12 missed
    // into class 0. Macro recall (1.0 + 0.6) / 2 = 0.8; weighted = accuracy
    // = 28/40 = 0.7.
    ConfusionMatrix cm(2, {"a", "b"});
    cm.at(0, 0) = 10;
    cm.at(1, 0) = 12;
    cm.at(1, 1) = 18;
    const Report report = ids::report_from_confusion(cm, AverageScheme::macro);

    CHECK(report.accuracy == doctest::Approx(0.7));
    CHECK(report.per_class[0].recall == 1.0);
    CHECK(report.per_class[1].recall == doctest::Approx(0.6));
    CHECK(report.per_class[0].support == 10);
    CHECK(report.per_class[1].support == 30);
    CHECK(report.macro_avg.recall == doctest::Approx(0.8));
    CHECK(report.weighted_avg.recall == doctest::Approx(0.7));
    CHECK(report.macro_avg.dr == doctest::Approx(80.0));
    CHECK(report.scheme == AverageScheme::macro);
    // Both schemes are always present regardless of the selected one.
    CHECK(report.weighted_avg.f1 > 0.0);
}

TEST_CASE("aggregate averages reports and concatenates raw repeats") {
    ConfusionMatrix cm1(2, {"a", "b"});
    cm1.at(0, 0) = 8;
    cm1.at(0, 1) = 2;
    cm1.at(1, 1) = 10;
    ConfusionMatrix cm2(2, {"a", "b"});
    cm2.at(0, 0) = 6;
    cm2.at(0, 1) = 4;
    cm2.at(1, 1) = 10;
    Report r1 = ids::report_from_confusion(cm1);
    Report r2 = ids::report_from_confusion(cm2);
    r1.per_repeat = {cm1};
    r2.per_repeat = {cm2};

    const Report combined = ids::aggregate({r1, r2}, AverageScheme::macro);
    CHECK(combined.accuracy ==
          doctest::Approx((r1.accuracy + r2.accuracy) / 2.0).epsilon(1e-12));
    CHECK(combined.per_class[0].recall ==
          doctest::Approx((0.8 + 0.6) / 2.0).epsilon(1e-12));
    CHECK(combined.per_class[0].support == 20);  // summed over repeats
    CHECK(combined.per_repeat.size() == 2);
    CHECK(combined.label_names == std::vector<std::string>{"a", "b"});

    SUBCASE("mismatched class sets are rejected") {
        ConfusionMatrix other(3, {"a", "b", "c"});
        other.at(0, 0) = 1;
        other.at(1, 1) = 1;
        other.at(2, 2) = 1;
        const Report r3 = ids::report_from_confusion(other);
        CHECK_THROWS_AS(ids::aggregate({r1, r3}, AverageScheme::macro), DataError);
    }
    SUBCASE("aggregating nothing is an error") {
        CHECK_THROWS_AS(ids::aggregate({}, AverageScheme::macro), DataError);
    }
}

TEST_CASE("degenerate flags name the class and metric") {
    ConfusionMatrix cm(2, {"a", "b"});
    cm.at(0, 0) = 5;  // class b never appears
    const Report report = ids::report_from_confusion(cm);
    bool found = false;
    for (const std::string& flag : report.degenerate_flags) {
        if (flag == "b/recall") found = true;
    }
    CHECK(found);
    CHECK_FALSE(report.degenerate_flags.empty());
}

TEST_CASE("report serialization") {
    ConfusionMatrix cm(2, {"a", "b"});
    cm.at(0, 0) = 3;
    cm.at(0, 1) = 1;
    cm.at(1, 1) = 4;
    Report report = ids::report_from_confusion(cm);
    report.per_repeat = {cm};

    SUBCASE("JSON carries the full structure") {
        const auto doc = report.to_json();
        REQUIRE(doc.contains("per_class"));
        REQUIRE(doc.contains("overall"));
        CHECK(doc.at("overall").contains("accuracy"));
        CHECK(doc.at("overall").contains("macro"));
        CHECK(doc.at("overall").contains("weighted"));
        CHECK(doc.contains("scheme"));
        CHECK(doc.contains("degenerate_flags"));
        CHECK(doc.contains("per_repeat"));
        CHECK(doc.contains("pooling"));
        CHECK(doc.at("per_class").size() == 2);
        const auto& row = doc.at("per_class").at(0);
        for (const char* key :
             {"class", "precision", "recall", "f1s", "far", "dr", "fpr", "support"}) {
            CHECK(row.contains(key));
        }
    }
    SUBCASE("markdown tables use the report header layout") {
        const std::string md = report.to_markdown();
        CHECK(md.find("| Class | PR | RC | F1s | FAR | DR |") != std::string::npos);
        CHECK(md.find("| Overall | ACC | PR | RC | F1s | FAR | DR |") !=
              std::string::npos);
        CHECK(md.find("| macro |") != std::string::npos);
        CHECK(md.find("| weighted |") != std::string::npos);
        // Ratio columns are three-decimal, DR two-decimal.
        CHECK(md.find("0.750") != std::string::npos);  // class-a recall 3/4
        CHECK(md.find("75.00") != std::string::npos);  // class-a DR
    }
}

TEST_CASE("average scheme names round-trip") {
    CHECK(ids::to_string(AverageScheme::macro) == "macro");
    CHECK(ids::to_string(AverageScheme::weighted) == "weighted");
    CHECK(ids::average_scheme_from_string("macro") == AverageScheme::macro);
    CHECK(ids::average_scheme_from_string("weighted") == AverageScheme::weighted);
    CHECK_THROWS_AS(ids::average_scheme_from_string("micro"), ids::ConfigError);
}
