#include "ids/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ids/error.hpp"
#include "ids/version.hpp"

namespace ids {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)
constexpr double kVarianceEpsilon = 1e-9;

}  // namespace

GaussianNB GaussianNB::fit(const DataTable& table) {
    if (table.n_rows() == 0) throw DataError("cannot fit naive Bayes on an empty table");
    const std::size_t k = table.n_classes();
    const std::size_t d = table.n_features();
    const std::size_t n = table.n_rows();

    GaussianNB model;
    model.n_features_ = d;
    model.label_names_ = table.label_names();
    model.priors_.assign(k, 0.0);
    model.means_.assign(k * d, 0.0);
    model.variances_.assign(k * d, 0.0);

    std::vector<std::size_t> class_n(k, 0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c = static_cast<std::size_t>(table.label(r));
        ++class_n[c];
        for (std::size_t f = 0; f < d; ++f) model.means_[c * d + f] += table.at(r, f);
    }
    for (std::size_t c = 0; c < k; ++c) {
        model.priors_[c] = static_cast<double>(class_n[c]) / static_cast<double>(n);
        if (class_n[c] == 0) continue;
        for (std::size_t f = 0; f < d; ++f) {
            model.means_[c * d + f] /= static_cast<double>(class_n[c]);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t c = static_cast<std::size_t>(table.label(r));
        for (std::size_t f = 0; f < d; ++f) {
            const double delta = table.at(r, f) - model.means_[c * d + f];
            model.variances_[c * d + f] += delta * delta;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (class_n[c] == 0) continue;
        for (std::size_t f = 0; f < d; ++f) {
            model.variances_[c * d + f] /= static_cast<double>(class_n[c]);
        }
    }

    // Pooled per-feature variance over all rows sets the floor's scale.
    double max_pooled = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += table.at(r, f);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double delta = table.at(r, f) - mean;
            var += delta * delta;
        }
        max_pooled = std::max(max_pooled, var / static_cast<double>(n));
    }
    const double floor =
        max_pooled > 0.0 ? kVarianceEpsilon * max_pooled : kVarianceEpsilon;
    for (double& v : model.variances_) v = std::max(v, floor);
    return model;
}

std::vector<double> GaussianNB::predict_proba(std::span<const double> row) const {
    if (row.size() != n_features_) {
        throw DataError("row has " + std::to_string(row.size()) + " features, model has " +
                        std::to_string(n_features_));
    }
    const std::size_t k = priors_.size();
    std::vector<double> log_post(k);
    for (std::size_t c = 0; c < k; ++c) {
        double lp = priors_[c] > 0.0 ? std::log(priors_[c])
                                     : -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < n_features_; ++f) {
            const double var = variances_[c * n_features_ + f];
            const double delta = row[f] - means_[c * n_features_ + f];
            lp += -0.5 * (kLogTwoPi + std::log(var)) - delta * delta / (2.0 * var);
        }
        log_post[c] = lp;
    }
    const double max_lp = *std::max_element(log_post.begin(), log_post.end());
    std::vector<double> proba(k);
    double norm = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        proba[c] = std::exp(log_post[c] - max_lp);
        norm += proba[c];
    }
    for (double& p : proba) p /= norm;
    return proba;
}

nlohmann::json GaussianNB::to_json() const {
    const std::size_t k = priors_.size();
    nlohmann::json means = nlohmann::json::array();
    nlohmann::json variances = nlohmann::json::array();
    for (std::size_t c = 0; c < k; ++c) {
        means.push_back(std::vector<double>(means_.begin() + c * n_features_,
                                            means_.begin() + (c + 1) * n_features_));
        variances.push_back(
            std::vector<double>(variances_.begin() + c * n_features_,
                                variances_.begin() + (c + 1) * n_features_));
    }
    return {{"model_kind", model_kind()}, {"version", kVersion},
            {"label_names", label_names_}, {"n_features", n_features_},
            {"priors", priors_},           {"means", std::move(means)},
            {"variances", std::move(variances)}};
}

GaussianNB GaussianNB::from_json(const nlohmann::json& doc) {
    if (doc.value("model_kind", "") != "gaussian_nb") {
        throw DataError("document is not a gaussian_nb model");
    }
    GaussianNB model;
    model.label_names_ = doc.at("label_names").get<std::vector<std::string>>();
    model.n_features_ = doc.at("n_features").get<std::size_t>();
    model.priors_ = doc.at("priors").get<std::vector<double>>();
    const std::size_t k = model.priors_.size();
    if (doc.at("means").size() != k || doc.at("variances").size() != k) {
        throw DataError("gaussian_nb document has inconsistent class counts");
    }
    for (std::size_t c = 0; c < k; ++c) {
        auto m = doc.at("means")[c].get<std::vector<double>>();
        auto v = doc.at("variances")[c].get<std::vector<double>>();
        if (m.size() != model.n_features_ || v.size() != model.n_features_) {
            throw DataError("gaussian_nb document has inconsistent feature counts");
        }
        model.means_.insert(model.means_.end(), m.begin(), m.end());
        model.variances_.insert(model.variances_.end(), v.begin(), v.end());
    }
    return model;
}

}  // namespace ids
