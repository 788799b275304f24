#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ids {

enum class ColumnKind { numeric, categorical, label };

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    // Position in the source CSV header; preserved through encoding and
    // feature masking so tables re-emit with their original column order.
    std::size_t index = 0;
};

// Immutable numeric feature matrix plus an integer label column; the one
// data carrier every pipeline stage consumes and produces. Construction
// validates that all values are finite and all label codes lie in [0, K).
class DataTable {
public:
    DataTable() = default;

    static DataTable from_parts(std::vector<ColumnMeta> feature_columns,
                                ColumnMeta label_column, std::vector<double> values,
                                std::vector<int> labels,
                                std::vector<std::string> label_names);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return feature_columns_.size(); }
    std::size_t n_classes() const { return label_names_.size(); }

    double at(std::size_t row, std::size_t feature) const {
        return values_[row * n_features() + feature];
    }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * n_features(), n_features()};
    }
    std::span<const double> values() const { return values_; }

    int label(std::size_t row) const { return labels_[row]; }
    std::span<const int> labels() const { return labels_; }
    const std::vector<std::string>& label_names() const { return label_names_; }
    const std::string& label_name(int code) const { return label_names_[code]; }

    const std::vector<ColumnMeta>& feature_columns() const { return feature_columns_; }
    const ColumnMeta& label_column() const { return label_column_; }
    std::vector<std::string> feature_names() const;

    // Gathers rows in the given order; duplicate indices are allowed
    // (bootstrap resampling). Class set and metadata are preserved.
    DataTable select_rows(std::span<const std::size_t> rows) const;

    // Restricts to the given feature columns, order preserved. Labels and
    // metadata untouched.
    DataTable select_features(std::span<const std::size_t> features) const;

    // Rows of each class, ascending by row index.
    std::vector<std::vector<std::size_t>> rows_by_class() const;

private:
    std::vector<ColumnMeta> feature_columns_;
    ColumnMeta label_column_;
    std::vector<double> values_;  // row-major, n_rows x n_features
    std::vector<int> labels_;
    std::vector<std::string> label_names_;
    std::size_t n_rows_ = 0;
};

}  // namespace ids
