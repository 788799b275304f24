#pragma once

#include "ids/experiment_config.hpp"
#include "ids/metrics.hpp"

namespace ids {

// In-memory pipeline stages. The cmd_* wrappers run these and write the
// artifacts; tests can call the stages directly.

// clean -> encode -> stratified subsample -> global min-max scale.
struct PrepResult {
    DataTable table;
    LabelMapping mapping;
    ScalerParams scaler;
};
PrepResult prep_table(const ExperimentConfig& config);

struct SelectResult {
    GaRunResult ga;
    DataTable reduced;
};
SelectResult select_features(const ExperimentConfig& config, const DataTable& prepared);

// Cross-validates the configured classifier. With ga_scope == per_fold the
// table should be the prepared (unreduced) one; selection then runs inside
// every training fold.
Report evaluate_classifier(const ExperimentConfig& config, ClassifierKind kind,
                           const DataTable& table);

struct ComparisonRow {
    ClassifierKind classifier;
    double accuracy = 0.0;
};

struct ExperimentResult {
    PrepResult prep;
    SelectResult select;
    Report report;
    std::vector<ComparisonRow> comparison;  // nb, dt, rf, stacking, bagging
    std::vector<std::string> warnings;      // soft ordering checks
};

// Command entry points: each takes a loaded config, acquires the output
// lock, writes its artifacts and a manifest into config.output_dir.
void cmd_prep(const ExperimentConfig& config);
void cmd_select(const ExperimentConfig& config);
void cmd_eval(const ExperimentConfig& config);
void cmd_gridsearch(const ExperimentConfig& config);
ExperimentResult cmd_experiment(const ExperimentConfig& config);

}  // namespace ids
