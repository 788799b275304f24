#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/ga_select.hpp"
#include "ids/grid_search.hpp"
#include "ids/hyperparams.hpp"
#include "ids/preprocess.hpp"

namespace ids {

enum class ClassifierKind { nb, dt, rf, stacking, bagging };
ClassifierKind classifier_kind_from_string(const std::string& s);
std::string to_string(ClassifierKind kind);

// Where the min-max scaler is fit: once on the prepared table (the classic
// sequential pipeline) or inside every CV training fold (leak-free).
enum class ScaleScope { global, per_fold };
// Where GA feature selection runs: once on the prepared table (the classic
// sequential pipeline) or nested inside every CV training fold.
enum class GaScope { global, per_fold };

struct CvSpec {
    std::size_t k = 10;
    std::size_t repeats = 3;
};

// Grid-search request over the conventional tree/forest parameter names.
struct GridSpec {
    ClassifierKind classifier = ClassifierKind::rf;  // rf or dt
    std::size_t k = 5;
    ParamGrid params;
};

// One experiment, mirrored field-for-field by the JSON config file. Seeds
// for subsampling, the GA and CV derive from the master seed unless the
// config pins them explicitly.
struct ExperimentConfig {
    std::filesystem::path dataset_path;
    std::string label_column;
    std::vector<std::string> drop_columns;
    CleaningPolicy cleaning_policy;
    std::map<std::string, std::size_t> subsample_counts;  // empty: keep all rows
    std::optional<std::uint64_t> subsample_seed;
    GaConfig ga;
    bool ga_seed_explicit = false;
    ClassifierKind classifier = ClassifierKind::stacking;
    Hyperparams hp_rf;
    Hyperparams hp_dt;
    std::size_t oof_folds = 5;
    std::size_t n_bags = 10;
    CvSpec cv;
    ScaleScope scale_scope = ScaleScope::global;
    GaScope ga_scope = GaScope::global;
    std::optional<GridSpec> grid;
    std::uint64_t seed = 42;
    std::filesystem::path output_dir;

    std::uint64_t resolved_subsample_seed() const;
    std::uint64_t resolved_ga_seed() const;
    std::uint64_t resolved_cv_seed() const;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& doc);
    // Reads and parses the file; all failures become ConfigError. CLI
    // overrides are applied to the raw document before from_json.
    static nlohmann::json load_document(const std::filesystem::path& path);
    static ExperimentConfig load(const std::filesystem::path& path);

    // Reference grid-search optima used when the config sets no hyperparams.
    static Hyperparams default_rf_hyperparams();
    static Hyperparams default_dt_hyperparams();
};

// Everything needed to re-run a command bit-for-bit, written next to its
// outputs.
struct RunManifest {
    std::string command;
    nlohmann::json config_snapshot;
    std::string version;
    std::string input_path;
    std::string input_hash;
    std::map<std::string, std::uint64_t> seeds;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

// PID lock file guarding an output directory against concurrent runs.
// A lock held by a dead process is reclaimed; a live one raises ConfigError.
class OutputLock {
  public:
    explicit OutputLock(const std::filesystem::path& output_dir);
    ~OutputLock();
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

  private:
    std::filesystem::path lock_path_;
};

std::string utc_timestamp();

}  // namespace ids
