#include "ids/data_table.hpp"

#include <cmath>
#include <unordered_set>

#include "ids/error.hpp"

namespace ids {

DataTable DataTable::from_parts(std::vector<ColumnMeta> feature_columns,
                                ColumnMeta label_column, std::vector<double> values,
                                std::vector<int> labels,
                                std::vector<std::string> label_names) {
    const std::size_t n_features = feature_columns.size();
    const std::size_t n_rows = labels.size();
    if (values.size() != n_rows * n_features) {
        throw DataError("value matrix size mismatch: expected " +
                        std::to_string(n_rows * n_features) + " cells, got " +
                        std::to_string(values.size()));
    }
    std::unordered_set<std::string> names;
    names.insert(label_column.name);
    for (const auto& col : feature_columns) {
        if (!names.insert(col.name).second) {
            throw DataError("duplicate column name: " + col.name);
        }
    }
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw DataError("non-finite cell in table; run cleaning first");
        }
    }
    const int k = static_cast<int>(label_names.size());
    for (const int code : labels) {
        if (code < 0 || code >= k) {
            throw DataError("label code " + std::to_string(code) +
                            " outside [0, " + std::to_string(k) + ")");
        }
    }

    DataTable t;
    t.feature_columns_ = std::move(feature_columns);
    t.label_column_ = std::move(label_column);
    t.values_ = std::move(values);
    t.labels_ = std::move(labels);
    t.label_names_ = std::move(label_names);
    t.n_rows_ = n_rows;
    return t;
}

std::vector<std::string> DataTable::feature_names() const {
    std::vector<std::string> names;
    names.reserve(feature_columns_.size());
    for (const auto& col : feature_columns_) names.push_back(col.name);
    return names;
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
    DataTable t;
    t.feature_columns_ = feature_columns_;
    t.label_column_ = label_column_;
    t.label_names_ = label_names_;
    t.n_rows_ = rows.size();
    const std::size_t width = n_features();
    t.values_.reserve(rows.size() * width);
    t.labels_.reserve(rows.size());
    for (const std::size_t r : rows) {
        const auto src = row(r);
        t.values_.insert(t.values_.end(), src.begin(), src.end());
        t.labels_.push_back(labels_[r]);
    }
    return t;
}

DataTable DataTable::select_features(std::span<const std::size_t> features) const {
    DataTable t;
    t.label_column_ = label_column_;
    t.labels_ = labels_;
    t.label_names_ = label_names_;
    t.n_rows_ = n_rows_;
    t.feature_columns_.reserve(features.size());
    for (const std::size_t f : features) t.feature_columns_.push_back(feature_columns_[f]);
    t.values_.reserve(n_rows_ * features.size());
    for (std::size_t r = 0; r < n_rows_; ++r) {
        const auto src = row(r);
        for (const std::size_t f : features) t.values_.push_back(src[f]);
    }
    return t;
}

std::vector<std::vector<std::size_t>> DataTable::rows_by_class() const {
    std::vector<std::vector<std::size_t>> by_class(n_classes());
    for (std::size_t r = 0; r < n_rows_; ++r) {
        by_class[static_cast<std::size_t>(labels_[r])].push_back(r);
    }
    return by_class;
}

}  // namespace ids
