#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ids {

class ConfusionMatrix {
  public:
    ConfusionMatrix() = default;
    ConfusionMatrix(std::size_t n_classes, std::vector<std::string> label_names = {});

    std::size_t n_classes() const { return n_classes_; }
    std::int64_t at(std::size_t actual, std::size_t predicted) const {
        return counts_[actual * n_classes_ + predicted];
    }
    std::int64_t& at(std::size_t actual, std::size_t predicted) {
        return counts_[actual * n_classes_ + predicted];
    }
    std::int64_t total() const;
    std::int64_t trace() const;
    // Row count of a class in y_true (tp + fn).
    std::int64_t support(std::size_t c) const;

    const std::vector<std::string>& label_names() const { return label_names_; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);

    nlohmann::json to_json() const;
    static ConfusionMatrix from_json(const nlohmann::json& doc);

  private:
    std::size_t n_classes_ = 0;
    std::vector<std::int64_t> counts_;  // row-major, [actual][predicted]
    std::vector<std::string> label_names_;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::size_t n_classes,
                          std::vector<std::string> label_names = {});

struct BinaryCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

BinaryCounts one_vs_rest(const ConfusionMatrix& cm, std::size_t c);

// The six report metrics. Zero-denominator cases yield 0 and, when the
// caller passes `degenerate`, set it; they never throw.
double accuracy(const ConfusionMatrix& cm, bool* degenerate = nullptr);
double recall(const BinaryCounts& b, bool* degenerate = nullptr);
double precision(const BinaryCounts& b, bool* degenerate = nullptr);
double f1(double pr, double rc, bool* degenerate = nullptr);
// Miss rate FN/(FN+TP), evaluated as 1 - recall so the complement identity
// holds bit-exactly.
double far(const BinaryCounts& b, bool* degenerate = nullptr);
double dr(const BinaryCounts& b, bool* degenerate = nullptr);  // 100 * recall
// Conventional false-positive rate FP/(FP+TN); reported alongside far.
double fpr(const BinaryCounts& b, bool* degenerate = nullptr);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double far = 0.0;
    double dr = 0.0;
    double fpr = 0.0;
    std::int64_t support = 0;
};

// Unweighted or support-weighted average of per-class rows.
struct AverageRow {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double far = 0.0;
    double dr = 0.0;
    double fpr = 0.0;
};

enum class AverageScheme { macro, weighted };
std::string to_string(AverageScheme scheme);
AverageScheme average_scheme_from_string(const std::string& s);

struct Report {
    std::vector<std::string> label_names;
    std::vector<ClassMetrics> per_class;
    double accuracy = 0.0;
    AverageRow macro_avg;
    AverageRow weighted_avg;
    AverageScheme scheme = AverageScheme::macro;
    // "class/metric" markers for every zero-denominator metric hit.
    std::vector<std::string> degenerate_flags;
    // Fold-pooled confusion matrix per repeat when produced by CV.
    std::vector<ConfusionMatrix> per_repeat;
    // How the numbers were combined (recorded in every serialized report).
    std::string pooling =
        "confusion counts pooled over folds within each repeat; metrics averaged "
        "over repeats";

    nlohmann::json to_json() const;
    std::string to_markdown() const;
};

// Full report from one confusion matrix (single repeat).
Report report_from_confusion(const ConfusionMatrix& cm,
                             AverageScheme scheme = AverageScheme::macro);

// Mean of the reports' per-class metrics and accuracy; class sets must
// match. Per-repeat raw results are concatenated.
Report aggregate(const std::vector<Report>& reports, AverageScheme scheme);

}  // namespace ids
