#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ids/data_table.hpp"

namespace ids {

// A loaded-but-not-yet-encoded column. Numeric columns hold doubles with
// NaN marking missing cells and +/-inf surviving until cleaning; categorical
// and label columns hold the raw strings.
struct RawColumn {
    ColumnMeta meta;
    std::vector<double> numeric;     // kind == numeric
    std::vector<std::string> text;   // kind == categorical or label
};

struct RawTable {
    std::vector<RawColumn> columns;  // source header order, label included
    std::size_t n_rows = 0;

    const RawColumn& label_column() const;
};

// Reads an RFC-4180-style CSV (header row, UTF-8, comma delimiter, quoted
// fields with "" escapes, LF or CRLF). Missing numeric cells are empty
// fields or the literal NaN token; Infinity/-Infinity parse to +/-inf.
// Column kinds are inferred: numeric iff every non-missing cell parses as a
// real number. drop_columns are removed before inference.
RawTable load_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::vector<std::string>& drop_columns = {});

// Re-emits an encoded table as CSV with the original header ordering.
// Feature values print in shortest round-trip form; the label column prints
// the original class names.
// Shortest round-trip decimal form (std::to_chars), so a written value
// parses back to the identical double.
std::string format_double(double v);

std::string to_csv(const DataTable& table);
void write_csv(const DataTable& table, const std::filesystem::path& path);

}  // namespace ids
