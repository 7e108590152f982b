#include <CLI11.hpp>

#include <iostream>

#include "pvwave/commands.hpp"

using namespace pvwave;

int main(int argc, char** argv) {
    CLI::App app{"pvwave: per-day volume-distribution fitting, classification, and regime correlation"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string input;
    std::string out_dir;
    std::string tick_size;
    std::string alpha;
    std::string df_convention;
    std::string seed;
    bool print_cfg = false;

    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--input", input, "input CSV path");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--tick-size", tick_size, "coarse price bin width");
    app.add_option("--alpha", alpha, "significance level");
    app.add_option("--df-convention", df_convention, "paper|conventional");
    app.add_flag("--print-config", print_cfg, "print the effective configuration and exit");

    auto* classify = app.add_subcommand("classify", "classify each day and emit summary + plot data");
    auto* correlate = app.add_subcommand("correlate", "regime correlation report from a classification CSV");
    std::string classification_csv;
    correlate->add_option("classification", classification_csv, "classification.csv from `classify`");
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic corpus with ground truth");
    auto* verify = app.add_subcommand("verify", "self-test against published statistics");

    CLI11_PARSE(app, argc, argv);

    RunConfig config;
    try {
        if (!config_path.empty()) load_config_file(config_path, config);
        if (!input.empty()) apply_config_entry("input", input, config);
        if (!out_dir.empty()) apply_config_entry("out", out_dir, config);
        if (!seed.empty()) apply_config_entry("seed", seed, config);
        if (!tick_size.empty()) apply_config_entry("tick_size", tick_size, config);
        if (!alpha.empty()) apply_config_entry("alpha", alpha, config);
        if (!df_convention.empty()) apply_config_entry("df_convention", df_convention, config);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (print_cfg) {
        print_config(std::cout, config);
        if (app.get_subcommands().empty()) return 0;
    }

    if (classify->parsed()) return cmd_classify(config, std::cout, std::cerr);
    if (correlate->parsed()) {
        if (classification_csv.empty()) {
            std::cerr << "correlate: missing classification CSV argument\n";
            return 2;
        }
        return cmd_correlate(config, classification_csv, std::cerr);
    }
    if (simulate->parsed()) return cmd_simulate(config, std::cerr);
    if (verify->parsed()) return cmd_verify(config, std::cout);

    if (!print_cfg) std::cout << app.help();
    return 0;
}
