#include "ids/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "ids/error.hpp"

namespace ids {

namespace {

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;  // line number where the record starts, 1-based
};

// Full-file state machine rather than line splitting, so quoted fields may
// contain commas, quotes, and newlines.
std::vector<Record> parse_records(const std::string& text,
                                  const std::filesystem::path& path) {
    std::vector<Record> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto trim = [](std::string& s) {
        std::size_t begin = 0;
        std::size_t end = s.size();
        while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
        while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t')) --end;
        if (begin != 0 || end != s.size()) s = s.substr(begin, end - begin);
    };

    auto end_field = [&] {
        if (!field_was_quoted) trim(field);
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        // A completely empty line is not a record.
        if (!(fields.size() == 1 && fields[0].empty())) {
            records.push_back({std::move(fields), record_line});
        }
        fields.clear();
        record_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                field_was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                ++line;
                end_record();
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field.push_back(c);
        }
    }
    if (quoted) {
        throw DataError(path.string() + ": unterminated quoted field at end of file");
    }
    if (!field.empty() || !fields.empty()) end_record();
    return records;
}

enum class CellClass { value, missing, pos_inf, neg_inf, unparseable };

CellClass classify_numeric(const std::string& cell, double& out) {
    if (cell.empty()) return CellClass::missing;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;  // from_chars rejects a leading plus
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return CellClass::unparseable;
    if (std::isnan(value)) return CellClass::missing;
    if (std::isinf(value)) return value > 0 ? CellClass::pos_inf : CellClass::neg_inf;
    out = value;
    return CellClass::value;
}

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n\r") != std::string::npos;
}

void append_csv_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const RawColumn& RawTable::label_column() const {
    for (const auto& col : columns) {
        if (col.meta.kind == ColumnKind::label) return col;
    }
    throw DataError("table has no label column");
}

RawTable load_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::vector<std::string>& drop_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const std::vector<Record> records = parse_records(text, path);
    if (records.empty()) throw DataError(path.string() + ": no header row");

    const std::vector<std::string>& header = records[0].fields;
    for (const auto& drop : drop_columns) {
        if (std::find(header.begin(), header.end(), drop) == header.end()) {
            throw DataError(path.string() + ": drop column \"" + drop +
                            "\" not found in header");
        }
    }
    if (std::find(drop_columns.begin(), drop_columns.end(), label_column) !=
        drop_columns.end()) {
        throw ConfigError("label column \"" + label_column + "\" is also listed in drop_columns");
    }

    std::vector<std::size_t> keep;  // header positions to retain
    bool label_found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(drop_columns.begin(), drop_columns.end(), header[i]) !=
            drop_columns.end()) {
            continue;
        }
        if (header[i] == label_column) label_found = true;
        keep.push_back(i);
    }
    if (!label_found) {
        throw DataError(path.string() + ": label column \"" + label_column +
                        "\" not found in header");
    }

    const std::size_t n_rows = records.size() - 1;
    const std::size_t width = header.size();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].fields.size() != width) {
            throw DataError(path.string() + ": row at line " +
                            std::to_string(records[r].line) + " has " +
                            std::to_string(records[r].fields.size()) +
                            " fields, expected " + std::to_string(width));
        }
    }

    RawTable table;
    table.n_rows = n_rows;
    table.columns.reserve(keep.size());
    for (std::size_t out_idx = 0; out_idx < keep.size(); ++out_idx) {
        const std::size_t src = keep[out_idx];
        RawColumn col;
        col.meta.name = header[src];
        col.meta.index = out_idx;
        if (header[src] == label_column) {
            col.meta.kind = ColumnKind::label;
            col.text.reserve(n_rows);
            for (std::size_t r = 1; r < records.size(); ++r) {
                col.text.push_back(records[r].fields[src]);
            }
            table.columns.push_back(std::move(col));
            continue;
        }

        // Numeric iff every non-missing cell parses as a real number.
        bool numeric = true;
        for (std::size_t r = 1; r < records.size() && numeric; ++r) {
            double unused = 0.0;
            if (classify_numeric(records[r].fields[src], unused) ==
                CellClass::unparseable) {
                numeric = false;
            }
        }
        if (numeric) {
            col.meta.kind = ColumnKind::numeric;
            col.numeric.reserve(n_rows);
            for (std::size_t r = 1; r < records.size(); ++r) {
                double value = std::numeric_limits<double>::quiet_NaN();
                switch (classify_numeric(records[r].fields[src], value)) {
                    case CellClass::value:
                        break;
                    case CellClass::missing:
                        value = std::numeric_limits<double>::quiet_NaN();
                        break;
                    case CellClass::pos_inf:
                        value = std::numeric_limits<double>::infinity();
                        break;
                    case CellClass::neg_inf:
                        value = -std::numeric_limits<double>::infinity();
                        break;
                    case CellClass::unparseable:
                        break;
                }
                col.numeric.push_back(value);
            }
        } else {
            col.meta.kind = ColumnKind::categorical;
            col.text.reserve(n_rows);
            for (std::size_t r = 1; r < records.size(); ++r) {
                col.text.push_back(records[r].fields[src]);
            }
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

std::string to_csv(const DataTable& table) {
    // Interleave the label column back at its original position.
    struct Slot {
        std::size_t source_index;
        bool is_label;
        std::size_t feature;  // feature matrix column when !is_label
    };
    std::vector<Slot> slots;
    slots.reserve(table.n_features() + 1);
    for (std::size_t f = 0; f < table.n_features(); ++f) {
        slots.push_back({table.feature_columns()[f].index, false, f});
    }
    slots.push_back({table.label_column().index, true, 0});
    std::sort(slots.begin(), slots.end(),
              [](const Slot& a, const Slot& b) { return a.source_index < b.source_index; });

    std::string out;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (s > 0) out += ',';
        const auto& name = slots[s].is_label ? table.label_column().name
                                             : table.feature_columns()[slots[s].feature].name;
        append_csv_field(out, name);
    }
    out += '\n';
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (s > 0) out += ',';
            if (slots[s].is_label) {
                append_csv_field(out, table.label_name(table.label(r)));
            } else {
                out += format_double(table.at(r, slots[s].feature));
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const DataTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << to_csv(table);
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace ids
