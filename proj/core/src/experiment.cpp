#include "ids/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <utility>

#include "ids/csv.hpp"
#include "ids/cross_validation.hpp"
#include "ids/ensembles.hpp"
#include "ids/error.hpp"
#include "ids/hash.hpp"
#include "ids/version.hpp"

namespace ids {

namespace {

// Adapter for per-fold feature selection: presents the full feature width
// while the wrapped model sees only the masked columns.
class MaskedClassifier final : public Classifier {
  public:
    MaskedClassifier(Chromosome mask, std::unique_ptr<Classifier> inner)
        : mask_(std::move(mask)),
          selected_(mask_.selected()),
          inner_(std::move(inner)) {}

    std::size_t n_classes() const override { return inner_->n_classes(); }
    std::size_t n_features() const override { return mask_.size(); }
    const std::vector<std::string>& label_names() const override {
        return inner_->label_names();
    }

    std::vector<double> predict_proba(std::span<const double> row) const override {
        std::vector<double> masked(selected_.size());
        for (std::size_t i = 0; i < selected_.size(); ++i) masked[i] = row[selected_[i]];
        return inner_->predict_proba(masked);
    }

    std::string model_kind() const override { return "masked"; }
    nlohmann::json to_json() const override {
        return {{"model_kind", model_kind()},
                {"version", kVersion},
                {"mask", mask_.key()},
                {"inner", inner_->to_json()}};
    }

  private:
    Chromosome mask_;
    std::vector<std::size_t> selected_;
    std::unique_ptr<Classifier> inner_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << text;
    if (!out) throw DataError("failed while writing: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

RunManifest start_manifest(const std::string& command, const ExperimentConfig& config,
                           const std::filesystem::path& input_path) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config_snapshot = config.to_json();
    manifest.version = kVersion;
    manifest.input_path = input_path.string();
    manifest.input_hash = file_fingerprint(input_path);
    manifest.seeds = {{"master", config.seed},
                      {"subsample", config.resolved_subsample_seed()},
                      {"ga", config.resolved_ga_seed()},
                      {"cv", config.resolved_cv_seed()}};
    manifest.started_at = utc_timestamp();
    return manifest;
}

void finish_manifest(RunManifest manifest, const std::filesystem::path& path) {
    manifest.finished_at = utc_timestamp();
    write_json(path, manifest.to_json());
}

// Reads back an already-prepared (clean, numeric) table.
DataTable load_prepared(const std::filesystem::path& path,
                        const std::string& label_column) {
    return encode_labels(load_csv(path, label_column)).table;
}

std::filesystem::path require_stage_file(const ExperimentConfig& config,
                                         const char* file, const char* produced_by) {
    const std::filesystem::path path = config.output_dir / file;
    if (!std::filesystem::exists(path)) {
        throw DataError("missing " + path.string() + "; run '" +
                        std::string(produced_by) + "' first");
    }
    return path;
}

ModelRecipe base_recipe(const ExperimentConfig& config, ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::nb:
            return [](const DataTable& train, std::uint64_t) {
                return std::make_unique<GaussianNB>(GaussianNB::fit(train));
            };
        case ClassifierKind::dt:
            return [hp = config.hp_dt](const DataTable& train, std::uint64_t seed) {
                return std::make_unique<DecisionTree>(DecisionTree::fit(train, hp, seed));
            };
        case ClassifierKind::rf:
            return [hp = config.hp_rf](const DataTable& train, std::uint64_t seed) {
                return std::make_unique<RandomForest>(RandomForest::fit(train, hp, seed));
            };
        case ClassifierKind::stacking:
            return [hp_rf = config.hp_rf, hp_dt = config.hp_dt,
                    oof = config.oof_folds](const DataTable& train, std::uint64_t seed) {
                return std::make_unique<StackingModel>(
                    StackingModel::fit(train, hp_rf, hp_dt, oof, seed));
            };
        case ClassifierKind::bagging:
            return [hp = config.hp_rf, bags = config.n_bags](const DataTable& train,
                                                             std::uint64_t seed) {
                return std::make_unique<BaggingModel>(
                    BaggingModel::fit(train, hp, bags, seed));
            };
    }
    throw ConfigError("unknown classifier kind");
}

ModelRecipe recipe_for(const ExperimentConfig& config, ClassifierKind kind) {
    ModelRecipe base = base_recipe(config, kind);
    if (config.ga_scope == GaScope::global) return base;
    return [base = std::move(base), ga = config.ga](const DataTable& train,
                                                    std::uint64_t seed) {
        GaConfig nested = ga;
        nested.seed = mix_seed(seed, seedstream::kNestedGa);
        GaRunResult result = run_ga(train, nested);
        DataTable masked = apply_mask(train, result.best_chromosome);
        return std::make_unique<MaskedClassifier>(std::move(result.best_chromosome),
                                                  base(masked, seed));
    };
}

CvOptions cv_options(const ExperimentConfig& config) {
    CvOptions options;
    options.scale_per_fold = config.scale_scope == ScaleScope::per_fold;
    return options;
}

Hyperparams apply_grid_point(Hyperparams hp, const ParamPoint& point) {
    for (const auto& [name, value] : point) {
        if (name == "n_estimators") {
            hp.n_estimators = value.get<std::size_t>();
        } else if (name == "criterion") {
            hp.criterion = value.get<std::string>();
        } else if (name == "max_depth") {
            hp.max_depth.reset();
            if (!value.is_null()) hp.max_depth = value.get<std::size_t>();
        } else if (name == "max_features") {
            hp.max_features.reset();
            if (!value.is_null()) hp.max_features = value.get<std::size_t>();
        } else if (name == "min_samples_split") {
            hp.min_samples_split = value.get<std::size_t>();
        } else if (name == "min_samples_leaf") {
            hp.min_samples_leaf = value.get<std::size_t>();
        } else {
            throw ConfigError("unknown grid parameter '" + name + "'");
        }
    }
    hp.validate();
    return hp;
}

// Report document with the run context the tables alone don't carry.
nlohmann::json report_document(const ExperimentConfig& config, ClassifierKind kind,
                               const Report& report) {
    nlohmann::json doc = report.to_json();
    doc["classifier"] = to_string(kind);
    doc["scale_scope"] = config.scale_scope == ScaleScope::global ? "global" : "per_fold";
    doc["ga_scope"] = config.ga_scope == GaScope::global ? "global" : "per_fold";
    doc["cv"] = {{"k", config.cv.k}, {"repeats", config.cv.repeats}};
    return doc;
}

void write_prep_artifacts(const ExperimentConfig& config, const PrepResult& prep) {
    write_csv(prep.table, config.output_dir / "prepared.csv");
    write_json(config.output_dir / "label_mapping.json", prep.mapping.to_json());
    write_json(config.output_dir / "scaler.json", prep.scaler.to_json());
}

void write_select_artifacts(const ExperimentConfig& config, const SelectResult& select) {
    write_json(config.output_dir / "ga_result.json", select.ga.to_json());
    write_csv(select.reduced, config.output_dir / "selected.csv");
}

void write_eval_artifacts(const ExperimentConfig& config, const Report& report) {
    write_json(config.output_dir / "report.json",
               report_document(config, config.classifier, report));
    write_text(config.output_dir / "report.md", report.to_markdown());
}

}  // namespace

PrepResult prep_table(const ExperimentConfig& config) {
    RawTable raw = load_csv(config.dataset_path, config.label_column,
                            config.drop_columns);
    raw = clean(std::move(raw), config.cleaning_policy);
    EncodedTable encoded = encode_labels(raw);

    PrepResult prep;
    prep.mapping = std::move(encoded.mapping);
    prep.table = std::move(encoded.table);
    if (!config.subsample_counts.empty()) {
        prep.table = stratified_subsample(prep.table, config.subsample_counts,
                                          config.resolved_subsample_seed());
    }
    prep.scaler = fit_minmax(prep.table);
    prep.table = apply_minmax(prep.table, prep.scaler);
    return prep;
}

SelectResult select_features(const ExperimentConfig& config, const DataTable& prepared) {
    GaConfig ga = config.ga;
    ga.seed = config.resolved_ga_seed();
    SelectResult select;
    select.ga = run_ga(prepared, ga);
    select.reduced = apply_mask(prepared, select.ga.best_chromosome);
    return select;
}

Report evaluate_classifier(const ExperimentConfig& config, ClassifierKind kind,
                           const DataTable& table) {
    return cross_validate(recipe_for(config, kind), table, config.cv.k,
                          config.cv.repeats, config.resolved_cv_seed(),
                          cv_options(config));
}

void cmd_prep(const ExperimentConfig& config) {
    OutputLock lock(config.output_dir);
    RunManifest manifest = start_manifest("prep", config, config.dataset_path);
    write_prep_artifacts(config, prep_table(config));
    finish_manifest(std::move(manifest), config.output_dir / "manifest_prep.json");
}

void cmd_select(const ExperimentConfig& config) {
    OutputLock lock(config.output_dir);
    const std::filesystem::path input =
        require_stage_file(config, "prepared.csv", "ids prep");
    RunManifest manifest = start_manifest("select", config, input);
    const DataTable prepared = load_prepared(input, config.label_column);
    write_select_artifacts(config, select_features(config, prepared));
    finish_manifest(std::move(manifest), config.output_dir / "manifest_select.json");
}

void cmd_eval(const ExperimentConfig& config) {
    OutputLock lock(config.output_dir);
    // Nested selection evaluates the full prepared table; the reduced table
    // only exists as a global-selection artifact.
    const std::filesystem::path input =
        config.ga_scope == GaScope::global
            ? require_stage_file(config, "selected.csv", "ids select")
            : require_stage_file(config, "prepared.csv", "ids prep");
    RunManifest manifest = start_manifest("eval", config, input);
    const DataTable table = load_prepared(input, config.label_column);
    write_eval_artifacts(config, evaluate_classifier(config, config.classifier, table));
    finish_manifest(std::move(manifest), config.output_dir / "manifest_eval.json");
}

void cmd_gridsearch(const ExperimentConfig& config) {
    if (!config.grid.has_value()) {
        throw ConfigError("gridsearch needs a 'grid' section in the config");
    }
    OutputLock lock(config.output_dir);
    const std::filesystem::path input =
        require_stage_file(config, "prepared.csv", "ids prep");
    RunManifest manifest = start_manifest("gridsearch", config, input);
    const DataTable table = load_prepared(input, config.label_column);

    const GridSpec& spec = *config.grid;
    const Hyperparams base_hp =
        spec.classifier == ClassifierKind::rf ? config.hp_rf : config.hp_dt;
    const RecipeFactory factory = [&](const ParamPoint& point) -> ModelRecipe {
        const Hyperparams hp = apply_grid_point(base_hp, point);
        if (spec.classifier == ClassifierKind::rf) {
            return [hp](const DataTable& train, std::uint64_t seed) {
                return std::make_unique<RandomForest>(RandomForest::fit(train, hp, seed));
            };
        }
        return [hp](const DataTable& train, std::uint64_t seed) {
            return std::make_unique<DecisionTree>(DecisionTree::fit(train, hp, seed));
        };
    };
    const GridSearchResult result =
        grid_search(spec.params, factory, table, spec.k, config.resolved_cv_seed(),
                    cv_options(config));
    write_json(config.output_dir / "gridsearch.json", result.to_json());
    finish_manifest(std::move(manifest), config.output_dir / "manifest_gridsearch.json");
}

ExperimentResult cmd_experiment(const ExperimentConfig& config) {
    OutputLock lock(config.output_dir);
    RunManifest manifest = start_manifest("experiment", config, config.dataset_path);

    ExperimentResult result;
    result.prep = prep_table(config);
    write_prep_artifacts(config, result.prep);

    result.select = select_features(config, result.prep.table);
    write_select_artifacts(config, result.select);

    const DataTable& eval_table =
        config.ga_scope == GaScope::global ? result.select.reduced : result.prep.table;
    result.report = evaluate_classifier(config, config.classifier, eval_table);
    write_eval_artifacts(config, result.report);

    // Figure-2-style comparison: every classifier on the same folds.
    const ClassifierKind kinds[] = {ClassifierKind::nb, ClassifierKind::dt,
                                    ClassifierKind::rf, ClassifierKind::stacking,
                                    ClassifierKind::bagging};
    std::string comparison_csv = "classifier,accuracy\n";
    for (ClassifierKind kind : kinds) {
        const double acc = kind == config.classifier
                               ? result.report.accuracy
                               : evaluate_classifier(config, kind, eval_table).accuracy;
        result.comparison.push_back({kind, acc});
        comparison_csv += to_string(kind) + "," + format_double(acc) + "\n";
    }
    write_text(config.output_dir / "comparison.csv", comparison_csv);

    auto accuracy_of = [&](ClassifierKind kind) {
        for (const ComparisonRow& row : result.comparison) {
            if (row.classifier == kind) return row.accuracy;
        }
        return 0.0;
    };
    const double best_single =
        std::max({accuracy_of(ClassifierKind::nb), accuracy_of(ClassifierKind::dt),
                  accuracy_of(ClassifierKind::rf)});
    const double stacking_acc = accuracy_of(ClassifierKind::stacking);
    const double bagging_acc = accuracy_of(ClassifierKind::bagging);
    if (stacking_acc < bagging_acc) {
        result.warnings.push_back("stacking accuracy " + format_double(stacking_acc) +
                                  " fell below bagging " + format_double(bagging_acc));
    }
    for (const auto& [name, acc] :
         {std::pair<const char*, double>{"stacking", stacking_acc},
          std::pair<const char*, double>{"bagging", bagging_acc}}) {
        if (acc < best_single) {
            result.warnings.push_back(std::string(name) + " accuracy " +
                                      format_double(acc) +
                                      " fell below the best single classifier " +
                                      format_double(best_single));
        }
    }
    for (const std::string& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }

    manifest.warnings = result.warnings;
    finish_manifest(std::move(manifest), config.output_dir / "manifest_experiment.json");
    return result;
}

}  // namespace ids
