#include "ids/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <utility>

#include "ids/error.hpp"
#include "ids/rng.hpp"

namespace ids {

FillRule fill_rule_from_string(const std::string& s) {
    if (s == "constant_zero") return FillRule::constant_zero;
    if (s == "column_mean") return FillRule::column_mean;
    throw ConfigError("unknown fill rule '" + s +
                      "' (expected constant_zero or column_mean)");
}

std::string to_string(FillRule rule) {
    return rule == FillRule::constant_zero ? "constant_zero" : "column_mean";
}

namespace {

double finite_mean(const std::vector<double>& cells, const std::string& column) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : cells) {
        if (std::isfinite(v)) {
            sum += v;
            ++n;
        }
    }
    if (n == 0) {
        throw DataError("column '" + column +
                        "' has no finite values to compute a mean from");
    }
    return sum / static_cast<double>(n);
}

}  // namespace

RawTable clean(RawTable table, const CleaningPolicy& policy) {
    for (RawColumn& col : table.columns) {
        if (col.meta.kind != ColumnKind::numeric) continue;
        bool needs_mean = false;
        for (double v : col.numeric) {
            if (std::isnan(v)) {
                needs_mean |= policy.missing_fill == FillRule::column_mean;
            } else if (std::isinf(v)) {
                needs_mean |= policy.infinity_fill == FillRule::column_mean;
            }
        }
        const double mean = needs_mean ? finite_mean(col.numeric, col.meta.name) : 0.0;
        const double missing_value =
            policy.missing_fill == FillRule::column_mean ? mean : 0.0;
        const double infinity_value =
            policy.infinity_fill == FillRule::column_mean ? mean : 0.0;
        for (double& v : col.numeric) {
            if (std::isnan(v)) {
                v = missing_value;
            } else if (std::isinf(v)) {
                v = infinity_value;
            }
        }
    }
    return table;
}

namespace {

std::vector<std::string> sorted_categories(const std::vector<std::string>& text) {
    std::set<std::string> unique(text.begin(), text.end());
    return {unique.begin(), unique.end()};
}

int code_of(const std::vector<std::string>& categories, const std::string& value) {
    auto it = std::lower_bound(categories.begin(), categories.end(), value);
    return static_cast<int>(it - categories.begin());
}

}  // namespace

const LabelMapping::ColumnCategories* LabelMapping::find(
    const std::string& column) const {
    for (const ColumnCategories& c : columns) {
        if (c.column == column) return &c;
    }
    return nullptr;
}

const std::string& LabelMapping::decode(const std::string& column, int code) const {
    const ColumnCategories* c = find(column);
    if (c == nullptr) {
        throw DataError("no category mapping recorded for column '" + column + "'");
    }
    if (code < 0 || static_cast<std::size_t>(code) >= c->categories.size()) {
        throw DataError("code " + std::to_string(code) + " out of range for column '" +
                        column + "'");
    }
    return c->categories[static_cast<std::size_t>(code)];
}

nlohmann::json LabelMapping::to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const ColumnCategories& c : columns) {
        cols.push_back({{"column", c.column}, {"categories", c.categories}});
    }
    return {{"columns", std::move(cols)}};
}

LabelMapping LabelMapping::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
        throw DataError("label mapping document must be an object with a 'columns' array");
    }
    LabelMapping mapping;
    for (const nlohmann::json& entry : doc["columns"]) {
        if (!entry.is_object() || !entry.contains("column") ||
            !entry.contains("categories")) {
            throw DataError("label mapping entry must carry 'column' and 'categories'");
        }
        ColumnCategories c;
        c.column = entry["column"].get<std::string>();
        c.categories = entry["categories"].get<std::vector<std::string>>();
        mapping.columns.push_back(std::move(c));
    }
    return mapping;
}

EncodedTable encode_labels(const RawTable& table) {
    LabelMapping mapping;
    std::vector<ColumnMeta> feature_metas;
    std::vector<const RawColumn*> feature_cols;
    const RawColumn* label_col = nullptr;
    for (const RawColumn& col : table.columns) {
        if (col.meta.kind == ColumnKind::label) {
            label_col = &col;
        } else {
            feature_metas.push_back(col.meta);
            feature_cols.push_back(&col);
        }
    }
    if (label_col == nullptr) throw DataError("table has no label column");

    // Per-column category lists for everything that needs encoding.
    std::vector<std::vector<std::string>> categories(feature_cols.size());
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
        if (feature_cols[f]->meta.kind != ColumnKind::categorical) continue;
        categories[f] = sorted_categories(feature_cols[f]->text);
        mapping.columns.push_back({feature_metas[f].name, categories[f]});
    }
    std::vector<std::string> label_names = sorted_categories(label_col->text);
    mapping.columns.push_back({label_col->meta.name, label_names});

    std::vector<double> values(table.n_rows * feature_cols.size());
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
        const RawColumn& col = *feature_cols[f];
        if (col.meta.kind == ColumnKind::numeric) {
            for (std::size_t r = 0; r < table.n_rows; ++r) {
                const double v = col.numeric[r];
                if (!std::isfinite(v)) {
                    throw DataError("column '" + col.meta.name +
                                    "' still has non-finite values; clean the table "
                                    "before encoding");
                }
                values[r * feature_cols.size() + f] = v;
            }
        } else {
            for (std::size_t r = 0; r < table.n_rows; ++r) {
                values[r * feature_cols.size() + f] =
                    static_cast<double>(code_of(categories[f], col.text[r]));
            }
        }
    }

    std::vector<int> labels(table.n_rows);
    for (std::size_t r = 0; r < table.n_rows; ++r) {
        labels[r] = code_of(label_names, label_col->text[r]);
    }

    EncodedTable out;
    out.table = DataTable::from_parts(std::move(feature_metas), label_col->meta,
                                      std::move(values), std::move(labels),
                                      std::move(label_names));
    out.mapping = std::move(mapping);
    return out;
}

nlohmann::json ScalerParams::to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const ColumnRange& c : columns) {
        cols.push_back({{"column", c.column}, {"min", c.min}, {"max", c.max}});
    }
    return {{"columns", std::move(cols)}};
}

ScalerParams ScalerParams::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
        throw DataError("scaler document must be an object with a 'columns' array");
    }
    ScalerParams params;
    for (const nlohmann::json& entry : doc["columns"]) {
        if (!entry.is_object() || !entry.contains("column") || !entry.contains("min") ||
            !entry.contains("max")) {
            throw DataError("scaler entry must carry 'column', 'min' and 'max'");
        }
        params.columns.push_back({entry["column"].get<std::string>(),
                                  entry["min"].get<double>(),
                                  entry["max"].get<double>()});
    }
    return params;
}

ScalerParams fit_minmax(const DataTable& table) {
    if (table.n_rows() == 0) throw DataError("cannot fit a scaler on an empty table");
    ScalerParams params;
    params.columns.reserve(table.n_features());
    for (std::size_t f = 0; f < table.n_features(); ++f) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            lo = std::min(lo, table.at(r, f));
            hi = std::max(hi, table.at(r, f));
        }
        params.columns.push_back({table.feature_columns()[f].name, lo, hi});
    }
    return params;
}

DataTable apply_minmax(const DataTable& table, const ScalerParams& params) {
    if (params.columns.size() != table.n_features()) {
        throw DataError("scaler covers " + std::to_string(params.columns.size()) +
                        " columns but table has " + std::to_string(table.n_features()));
    }
    for (std::size_t f = 0; f < table.n_features(); ++f) {
        if (params.columns[f].column != table.feature_columns()[f].name) {
            throw DataError("scaler column '" + params.columns[f].column +
                            "' does not match table column '" +
                            table.feature_columns()[f].name + "'");
        }
    }
    std::vector<double> values(table.values().begin(), table.values().end());
    const std::size_t d = table.n_features();
    for (std::size_t f = 0; f < d; ++f) {
        const double lo = params.columns[f].min;
        const double range = params.columns[f].max - lo;
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            double& v = values[r * d + f];
            v = range > 0.0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
        }
    }
    return DataTable::from_parts(table.feature_columns(), table.label_column(),
                                 std::move(values),
                                 {table.labels().begin(), table.labels().end()},
                                 table.label_names());
}

DataTable stratified_subsample(const DataTable& table,
                               const std::map<std::string, std::size_t>& counts,
                               std::uint64_t seed) {
    // Resolve names to codes up front so typos fail loudly.
    std::vector<std::size_t> want(table.n_classes(), 0);
    for (const auto& [name, count] : counts) {
        auto it = std::find(table.label_names().begin(), table.label_names().end(), name);
        if (it == table.label_names().end()) {
            throw DataError("subsample requests unknown class '" + name + "'");
        }
        want[static_cast<std::size_t>(it - table.label_names().begin())] = count;
    }

    const std::vector<std::vector<std::size_t>> by_class = table.rows_by_class();
    std::vector<std::size_t> chosen;
    std::vector<int> new_code(table.n_classes(), -1);
    std::vector<std::string> kept_names;
    for (std::size_t c = 0; c < table.n_classes(); ++c) {
        if (want[c] == 0) continue;
        if (want[c] > by_class[c].size()) {
            throw DataError("class '" + table.label_name(static_cast<int>(c)) + "' has " +
                            std::to_string(by_class[c].size()) + " rows, cannot draw " +
                            std::to_string(want[c]));
        }
        std::vector<std::size_t> pool = by_class[c];
        Rng rng(mix_seed(seed, seedstream::kSubsample, c));
        rng.shuffle(pool);
        chosen.insert(chosen.end(), pool.begin(), pool.begin() + want[c]);
        new_code[c] = static_cast<int>(kept_names.size());
        kept_names.push_back(table.label_name(static_cast<int>(c)));
    }
    std::sort(chosen.begin(), chosen.end());

    const std::size_t d = table.n_features();
    std::vector<double> values(chosen.size() * d);
    std::vector<int> labels(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        std::span<const double> src = table.row(chosen[i]);
        std::copy(src.begin(), src.end(), values.begin() + i * d);
        labels[i] = new_code[static_cast<std::size_t>(table.label(chosen[i]))];
    }
    return DataTable::from_parts(table.feature_columns(), table.label_column(),
                                 std::move(values), std::move(labels),
                                 std::move(kept_names));
}

}  // namespace ids
