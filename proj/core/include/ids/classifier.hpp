#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/data_table.hpp"

namespace ids {

// Index of the largest value; ties go to the lowest index so predictions are
// deterministic across platforms.
std::size_t argmax_lowest(std::span<const double> values);

class Classifier {
  public:
    virtual ~Classifier() = default;

    virtual std::size_t n_classes() const = 0;
    virtual std::size_t n_features() const = 0;
    virtual const std::vector<std::string>& label_names() const = 0;

    // Probability per class; sums to 1.
    virtual std::vector<double> predict_proba(std::span<const double> row) const = 0;
    virtual int predict(std::span<const double> row) const;

    virtual std::string model_kind() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

std::vector<int> predict_all(const Classifier& model, const DataTable& table);

// Reconstructs any serialized model by its "model_kind" tag.
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& doc);

}  // namespace ids
