#include "ids/experiment_config.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <ctime>
#include <fstream>

#include <unistd.h>

#include "ids/error.hpp"
#include "ids/rng.hpp"
#include "ids/version.hpp"

namespace ids {

ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "nb") return ClassifierKind::nb;
    if (s == "dt") return ClassifierKind::dt;
    if (s == "rf") return ClassifierKind::rf;
    if (s == "stacking") return ClassifierKind::stacking;
    if (s == "bagging") return ClassifierKind::bagging;
    throw ConfigError("unknown classifier '" + s +
                      "' (expected nb, dt, rf, stacking or bagging)");
}

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::nb: return "nb";
        case ClassifierKind::dt: return "dt";
        case ClassifierKind::rf: return "rf";
        case ClassifierKind::stacking: return "stacking";
        case ClassifierKind::bagging: return "bagging";
    }
    return "";
}

namespace {

ScaleScope scale_scope_from_string(const std::string& s) {
    if (s == "global") return ScaleScope::global;
    if (s == "per_fold") return ScaleScope::per_fold;
    throw ConfigError("scale_scope must be 'global' or 'per_fold', got '" + s + "'");
}

GaScope ga_scope_from_string(const std::string& s) {
    if (s == "global") return GaScope::global;
    if (s == "per_fold") return GaScope::per_fold;
    throw ConfigError("ga_scope must be 'global' or 'per_fold', got '" + s + "'");
}

const char* to_string(ScaleScope scope) {
    return scope == ScaleScope::global ? "global" : "per_fold";
}

const char* to_string(GaScope scope) {
    return scope == GaScope::global ? "global" : "per_fold";
}

// The six conventional tree/forest grid parameters the schema accepts.
const std::vector<std::string> kGridParamNames = {
    "n_estimators",      "criterion",        "max_depth",
    "max_features",      "min_samples_split", "min_samples_leaf"};

GridSpec grid_spec_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("grid must be a JSON object");
    GridSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "classifier") {
            spec.classifier = classifier_kind_from_string(value.get<std::string>());
            if (spec.classifier != ClassifierKind::rf &&
                spec.classifier != ClassifierKind::dt) {
                throw ConfigError("grid classifier must be rf or dt");
            }
        } else if (key == "k") {
            spec.k = value.get<std::size_t>();
        } else if (key == "params") {
            if (!value.is_object()) throw ConfigError("grid params must be an object");
            for (const auto& [name, candidates] : value.items()) {
                if (std::find(kGridParamNames.begin(), kGridParamNames.end(), name) ==
                    kGridParamNames.end()) {
                    throw ConfigError("unknown grid parameter '" + name + "'");
                }
                if (!candidates.is_array() || candidates.empty()) {
                    throw ConfigError("grid parameter '" + name +
                                      "' needs a nonempty candidate array");
                }
                spec.params.values[name] =
                    std::vector<nlohmann::json>(candidates.begin(), candidates.end());
            }
        } else {
            throw ConfigError("unknown grid key '" + key + "'");
        }
    }
    if (spec.params.values.empty()) {
        throw ConfigError("grid params must name at least one parameter");
    }
    return spec;
}

nlohmann::json grid_spec_to_json(const GridSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, candidates] : spec.params.values) {
        params[name] = candidates;
    }
    return {{"classifier", to_string(spec.classifier)},
            {"k", spec.k},
            {"params", std::move(params)}};
}

CleaningPolicy cleaning_policy_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("cleaning_policy must be a JSON object");
    CleaningPolicy policy;
    for (const auto& [key, value] : doc.items()) {
        if (key == "missing_fill") {
            policy.missing_fill = fill_rule_from_string(value.get<std::string>());
        } else if (key == "infinity_fill") {
            policy.infinity_fill = fill_rule_from_string(value.get<std::string>());
        } else {
            throw ConfigError("unknown cleaning_policy key '" + key + "'");
        }
    }
    return policy;
}

}  // namespace

Hyperparams ExperimentConfig::default_rf_hyperparams() {
    Hyperparams hp;
    hp.n_estimators = 100;
    hp.criterion = "gini";
    hp.max_depth = 80;
    hp.max_features = 2;
    hp.min_samples_split = 8;
    hp.min_samples_leaf = 3;
    return hp;
}

Hyperparams ExperimentConfig::default_dt_hyperparams() {
    Hyperparams hp;
    hp.n_estimators = 1;
    hp.criterion = "gini";
    hp.min_samples_split = 2;
    hp.min_samples_leaf = 1;
    return hp;
}

std::uint64_t ExperimentConfig::resolved_subsample_seed() const {
    return subsample_seed.value_or(mix_seed(seed, seedstream::kDeriveSubsample));
}

std::uint64_t ExperimentConfig::resolved_ga_seed() const {
    return ga_seed_explicit ? ga.seed : mix_seed(seed, seedstream::kDeriveGa);
}

std::uint64_t ExperimentConfig::resolved_cv_seed() const {
    return mix_seed(seed, seedstream::kDeriveCv);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json doc;
    doc["dataset_path"] = dataset_path.string();
    doc["label_column"] = label_column;
    doc["drop_columns"] = drop_columns;
    doc["cleaning_policy"] = {{"missing_fill", to_string(cleaning_policy.missing_fill)},
                              {"infinity_fill", to_string(cleaning_policy.infinity_fill)}};
    doc["subsample_counts"] = subsample_counts;
    if (subsample_seed.has_value()) doc["subsample_seed"] = *subsample_seed;
    nlohmann::json ga_doc = ga.to_json();
    if (!ga_seed_explicit) ga_doc.erase("seed");
    doc["ga"] = std::move(ga_doc);
    doc["classifier"] = to_string(classifier);
    doc["hyperparams"] = {{"rf", hp_rf.to_json()}, {"dt", hp_dt.to_json()}};
    doc["stacking"] = {{"oof_folds", oof_folds}};
    doc["bagging"] = {{"n_bags", n_bags}};
    doc["cv"] = {{"k", cv.k}, {"repeats", cv.repeats}};
    doc["scale_scope"] = to_string(scale_scope);
    doc["ga_scope"] = to_string(ga_scope);
    if (grid.has_value()) doc["grid"] = grid_spec_to_json(*grid);
    doc["seed"] = seed;
    doc["output_dir"] = output_dir.string();
    return doc;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig config;
    config.hp_rf = default_rf_hyperparams();
    config.hp_dt = default_dt_hyperparams();

    // The master seed resolves derived seeds, so read it before the rest.
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();

    for (const auto& [key, value] : doc.items()) {
        if (key == "dataset_path") {
            config.dataset_path = value.get<std::string>();
        } else if (key == "label_column") {
            config.label_column = value.get<std::string>();
        } else if (key == "drop_columns") {
            config.drop_columns = value.get<std::vector<std::string>>();
        } else if (key == "cleaning_policy") {
            config.cleaning_policy = cleaning_policy_from_json(value);
        } else if (key == "subsample_counts") {
            if (!value.is_object()) {
                throw ConfigError("subsample_counts must map class names to counts");
            }
            for (const auto& [name, count] : value.items()) {
                config.subsample_counts[name] = count.get<std::size_t>();
            }
        } else if (key == "subsample_seed") {
            config.subsample_seed = value.get<std::uint64_t>();
        } else if (key == "ga") {
            config.ga = GaConfig::from_json(value);
            config.ga_seed_explicit = value.contains("seed");
        } else if (key == "classifier") {
            config.classifier = classifier_kind_from_string(value.get<std::string>());
        } else if (key == "hyperparams") {
            if (!value.is_object()) throw ConfigError("hyperparams must be an object");
            for (const auto& [name, hp] : value.items()) {
                if (name == "rf") {
                    config.hp_rf = Hyperparams::from_json(hp);
                } else if (name == "dt") {
                    config.hp_dt = Hyperparams::from_json(hp);
                } else {
                    throw ConfigError("unknown hyperparams section '" + name + "'");
                }
            }
        } else if (key == "stacking") {
            if (!value.is_object() || value.size() != 1 || !value.contains("oof_folds")) {
                throw ConfigError("stacking section must be {\"oof_folds\": N}");
            }
            config.oof_folds = value["oof_folds"].get<std::size_t>();
        } else if (key == "bagging") {
            if (!value.is_object() || value.size() != 1 || !value.contains("n_bags")) {
                throw ConfigError("bagging section must be {\"n_bags\": N}");
            }
            config.n_bags = value["n_bags"].get<std::size_t>();
        } else if (key == "cv") {
            if (!value.is_object()) throw ConfigError("cv must be an object");
            for (const auto& [name, v] : value.items()) {
                if (name == "k") {
                    config.cv.k = v.get<std::size_t>();
                } else if (name == "repeats") {
                    config.cv.repeats = v.get<std::size_t>();
                } else {
                    throw ConfigError("unknown cv key '" + name + "'");
                }
            }
        } else if (key == "scale_scope") {
            config.scale_scope = scale_scope_from_string(value.get<std::string>());
        } else if (key == "ga_scope") {
            config.ga_scope = ga_scope_from_string(value.get<std::string>());
        } else if (key == "grid") {
            config.grid = grid_spec_from_json(value);
        } else if (key == "seed") {
            // already read
        } else if (key == "output_dir") {
            config.output_dir = value.get<std::string>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (config.dataset_path.empty()) throw ConfigError("config needs dataset_path");
    if (config.label_column.empty()) throw ConfigError("config needs label_column");
    if (config.output_dir.empty()) throw ConfigError("config needs output_dir");
    if (config.cv.k < 2) throw ConfigError("cv.k must be >= 2");
    if (config.cv.repeats < 1) throw ConfigError("cv.repeats must be >= 1");
    if (!config.ga_seed_explicit) config.ga.seed = config.resolved_ga_seed();
    return config;
}

nlohmann::json ExperimentConfig::load_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " +
                          e.what());
    }
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    try {
        return from_json(load_document(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},
            {"config", config_snapshot},
            {"version", version},
            {"input_path", input_path},
            {"input_hash", input_hash},
            {"seeds", seeds},
            {"started_at", started_at},
            {"finished_at", finished_at},
            {"warnings", warnings}};
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

OutputLock::OutputLock(const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    lock_path_ = output_dir / ".lock";
    if (std::filesystem::exists(lock_path_)) {
        std::ifstream in(lock_path_);
        long pid = 0;
        in >> pid;
        if (pid > 0 && (::kill(static_cast<pid_t>(pid), 0) == 0 || errno == EPERM)) {
            throw ConfigError("output directory " + output_dir.string() +
                              " is locked by running process " + std::to_string(pid));
        }
        // Stale lock from a dead process: reclaim it.
    }
    std::ofstream out(lock_path_, std::ios::trunc);
    if (!out) throw DataError("cannot write lock file: " + lock_path_.string());
    out << ::getpid() << "\n";
}

OutputLock::~OutputLock() {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
}

}  // namespace ids
