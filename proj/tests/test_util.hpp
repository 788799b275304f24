#pragma once

// Small fixtures shared across the suites: in-memory tables, Gaussian blob
// data, scratch directories and scoped environment overrides.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ids/data_table.hpp"
#include "ids/rng.hpp"

namespace test_util {

inline ids::DataTable make_table(const std::vector<std::vector<double>>& rows,
                                 const std::vector<int>& labels,
                                 std::vector<std::string> label_names) {
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    std::vector<ids::ColumnMeta> features;
    features.reserve(d);
    for (std::size_t f = 0; f < d; ++f) {
        features.push_back({"f" + std::to_string(f), ids::ColumnKind::numeric, f});
    }
    ids::ColumnMeta label{"label", ids::ColumnKind::label, d};
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
    return ids::DataTable::from_parts(std::move(features), std::move(label),
                                      std::move(values), labels,
                                      std::move(label_names));
}

// Spherical Gaussian clusters, class c centered at c * spacing on every axis.
inline ids::DataTable make_blobs(std::size_t n_per_class, std::size_t n_classes,
                                 std::size_t n_features, double spacing, double sigma,
                                 std::uint64_t seed) {
    ids::Rng rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> names;
    names.reserve(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) names.push_back("c" + std::to_string(c));
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < n_per_class; ++i) {
            std::vector<double> row(n_features);
            for (double& v : row) {
                v = static_cast<double>(c) * spacing + sigma * rng.normal();
            }
            rows.push_back(std::move(row));
            labels.push_back(static_cast<int>(c));
        }
    }
    return make_table(rows, labels, std::move(names));
}

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("ids_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

struct ScopedEnv {
    std::string name;
    std::optional<std::string> old;

    ScopedEnv(const std::string& n, const std::string& value) : name(n) {
        if (const char* v = ::getenv(n.c_str())) old = v;
        ::setenv(n.c_str(), value.c_str(), 1);
    }
    ~ScopedEnv() {
        if (old) {
            ::setenv(name.c_str(), old->c_str(), 1);
        } else {
            ::unsetenv(name.c_str());
        }
    }
    ScopedEnv(const ScopedEnv&) = delete;
    ScopedEnv& operator=(const ScopedEnv&) = delete;
};

}  // namespace test_util
