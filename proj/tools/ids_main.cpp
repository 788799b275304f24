#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ids/error.hpp"
#include "ids/experiment.hpp"
#include "ids/version.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
};

// Shared --config/--seed/--out options for every subcommand.
void add_common_options(CLI::App* sub, CliArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config file (JSON)")
        ->required();
    sub->add_option("--seed", args.seed, "override the config's master seed")
        ->check(CLI::NonNegativeNumber)
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--out", args.out_dir, "override the config's output directory");
}

ids::ExperimentConfig load_config(const CliArgs& args) {
    nlohmann::json doc = ids::ExperimentConfig::load_document(args.config_path);
    if (args.seed_set) doc["seed"] = args.seed;
    if (!args.out_dir.empty()) doc["output_dir"] = args.out_dir;
    try {
        return ids::ExperimentConfig::from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ids::ConfigError("config file " + args.config_path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GA feature selection and ensemble intrusion-detection experiments"};
    app.set_version_flag("--version", std::string("ids ") + ids::kVersion);
    app.require_subcommand(1);

    CliArgs args;
    CLI::App* prep = app.add_subcommand("prep", "clean, encode, subsample and scale");
    CLI::App* select = app.add_subcommand("select", "run GA feature selection");
    CLI::App* eval = app.add_subcommand("eval", "cross-validate the classifier");
    CLI::App* gridsearch =
        app.add_subcommand("gridsearch", "exhaustive hyperparameter search");
    CLI::App* experiment =
        app.add_subcommand("experiment", "full pipeline plus classifier comparison");
    for (CLI::App* sub : {prep, select, eval, gridsearch, experiment}) {
        add_common_options(sub, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const ids::ExperimentConfig config = load_config(args);
        if (prep->parsed()) {
            ids::cmd_prep(config);
        } else if (select->parsed()) {
            ids::cmd_select(config);
        } else if (eval->parsed()) {
            ids::cmd_eval(config);
        } else if (gridsearch->parsed()) {
            ids::cmd_gridsearch(config);
        } else if (experiment->parsed()) {
            ids::cmd_experiment(config);
        }
    } catch (const ids::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
