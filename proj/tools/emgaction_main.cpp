#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "emgaction/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sEMG physical action classification pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::int64_t seed_override = -1;
    int threads_override = -1;
    std::string out_override;
    app.add_option("--config", config_path, "run configuration file (key = value lines)");
    app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--threads", threads_override, "worker threads (0 = all cores)");
    app.add_option("--out", out_override, "override the output directory");

    CLI::App* synth = app.add_subcommand("synth", "generate the synthetic dataset + manifest");
    CLI::App* extract = app.add_subcommand("extract", "extract the feature matrix from a manifest");
    CLI::App* train = app.add_subcommand("train", "fit and save one model per configuration");
    CLI::App* evaluate = app.add_subcommand("evaluate", "run the classifier x subset grid");
    CLI::App* sweep = app.add_subcommand("sweep-pca", "accuracy against PCA dimensionality");
    CLI::App* report = app.add_subcommand("report", "print the evaluation summary");

    CLI11_PARSE(app, argc, argv);

    try {
        emgaction::RunConfig cfg;
        if (!config_path.empty()) cfg = emgaction::RunConfig::from_file(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (threads_override >= 0) cfg.threads = threads_override;
        if (!out_override.empty()) cfg.out_dir = out_override;

        if (synth->parsed()) emgaction::cmd_synth(cfg);
        if (extract->parsed()) emgaction::cmd_extract(cfg);
        if (train->parsed()) emgaction::cmd_train(cfg);
        if (evaluate->parsed()) emgaction::cmd_evaluate(cfg);
        if (sweep->parsed()) emgaction::cmd_sweep_pca(cfg);
        if (report->parsed()) emgaction::cmd_report(cfg);
        return 0;
    } catch (const emgaction::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
