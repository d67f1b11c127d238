#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quasifix/quasifix.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point solver for enriched contractions in quasi-normed spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    CLI::App* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "Path to the experiment config JSON")
        ->required();
    run->add_option("--out", out_dir, "Directory for trace.csv and result/report JSON");
    run->add_option("--jobs", jobs, "Worker threads for sampling-based estimates")
        ->check(CLI::PositiveNumber);

    CLI::App* catalog = app.add_subcommand("catalog", "List builtin norms and maps");

    CLI11_PARSE(app, argc, argv);

    if (catalog->parsed()) {
        std::cout << quasifix::catalog_text();
        return 0;
    }

    try {
        const quasifix::Json config = quasifix::load_config_file(config_path);
        const quasifix::RunOutcome outcome =
            quasifix::run_experiment(config, out_dir, jobs);
        std::cout << outcome.summary << "\n";
        return outcome.exit_code;
    } catch (const quasifix::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const quasifix::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
