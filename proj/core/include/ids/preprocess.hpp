#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/csv.hpp"
#include "ids/data_table.hpp"

namespace ids {

enum class FillRule { constant_zero, column_mean };

FillRule fill_rule_from_string(const std::string& s);
std::string to_string(FillRule rule);

struct CleaningPolicy {
    FillRule missing_fill = FillRule::constant_zero;
    FillRule infinity_fill = FillRule::column_mean;
};

// Replaces missing (NaN) and infinite numeric cells per policy. Column means
// are computed over finite cells only; a numeric column with no finite cells
// under a column_mean rule is an error. Text columns pass through.
RawTable clean(RawTable table, const CleaningPolicy& policy);

// Lexicographically ordered category lists, one per encoded column (the
// label column included); code = position in the list.
struct LabelMapping {
    struct ColumnCategories {
        std::string column;
        std::vector<std::string> categories;
    };
    std::vector<ColumnCategories> columns;

    const ColumnCategories* find(const std::string& column) const;
    // Original raw string for a code; round-trip inverse of encoding.
    const std::string& decode(const std::string& column, int code) const;

    nlohmann::json to_json() const;
    static LabelMapping from_json(const nlohmann::json& doc);
};

struct EncodedTable {
    DataTable table;
    LabelMapping mapping;
};

// Converts every categorical column (and the label column) to integer codes
// by the lexicographic mapping. Requires cleaning to have run: any remaining
// non-finite numeric cell is an error.
EncodedTable encode_labels(const RawTable& table);

struct ScalerParams {
    struct ColumnRange {
        std::string column;
        double min = 0.0;
        double max = 0.0;
    };
    std::vector<ColumnRange> columns;  // one per feature column, matrix order

    nlohmann::json to_json() const;
    static ScalerParams from_json(const nlohmann::json& doc);
};

// Per-column min/max over the given (training) rows.
ScalerParams fit_minmax(const DataTable& table);

// x' = (x - min) / (max - min), clamped to [0, 1]; zero-range columns map
// to 0. Errors if the column layout differs from the fitted one.
DataTable apply_minmax(const DataTable& table, const ScalerParams& params);

// Draws exactly counts[class] rows per class, uniformly without replacement.
// Classes absent from the map (or requested with count 0) are excluded and
// the remaining classes are re-coded compactly, preserving their order.
DataTable stratified_subsample(const DataTable& table,
                               const std::map<std::string, std::size_t>& counts,
                               std::uint64_t seed);

}  // namespace ids
