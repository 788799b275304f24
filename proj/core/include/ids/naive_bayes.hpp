#pragma once

#include <cstdint>
#include <vector>

#include "ids/classifier.hpp"

namespace ids {

// Gaussian Naive Bayes: class priors from frequencies, per-(class, feature)
// mean and population variance. Variances are floored at 1e-9 times the
// largest pooled feature variance (1e-9 absolutely when every feature is
// constant) so densities stay finite; posteriors are computed in log space.
class GaussianNB final : public Classifier {
  public:
    static GaussianNB fit(const DataTable& table);

    std::size_t n_classes() const override { return priors_.size(); }
    std::size_t n_features() const override { return n_features_; }
    const std::vector<std::string>& label_names() const override {
        return label_names_;
    }

    std::vector<double> predict_proba(std::span<const double> row) const override;

    std::string model_kind() const override { return "gaussian_nb"; }
    nlohmann::json to_json() const override;
    static GaussianNB from_json(const nlohmann::json& doc);

    const std::vector<double>& priors() const { return priors_; }
    double mean(std::size_t c, std::size_t f) const {
        return means_[c * n_features_ + f];
    }
    double variance(std::size_t c, std::size_t f) const {
        return variances_[c * n_features_ + f];
    }

  private:
    std::vector<double> priors_;
    std::vector<double> means_;      // row-major, K x d
    std::vector<double> variances_;  // row-major, K x d, all > 0
    std::vector<std::string> label_names_;
    std::size_t n_features_ = 0;
};

}  // namespace ids
