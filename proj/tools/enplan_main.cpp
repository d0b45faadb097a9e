// Command-line entry point: single runs, cost sweeps, and LCOE tables.
#include <iostream>

#include <CLI11.hpp>

#include "enplan/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"energy system capacity expansion and LCOE toolkit"};
    app.require_subcommand(1);

    std::string out_dir;
    bool export_mps = false;
    bool verbose = false;
    int threads = 1;
    app.add_option("--out", out_dir, "output directory (default: $ENPLAN_OUT or cwd)");
    app.add_flag("--export-mps", export_mps, "write the model in MPS format");
    app.add_flag("--verbose", verbose, "write a solver iteration log");
    app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

    std::string scenario_path;
    auto* run_cmd = app.add_subcommand("run", "solve one scenario and write reports");
    run_cmd->add_option("scenario", scenario_path, "scenario TOML file")->required();

    std::string sweep_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "overnight-cost x construction-time sweep");
    sweep_cmd->add_option("spec", sweep_path, "sweep TOML file")->required();

    std::string data_dir;
    auto* lcoe_cmd = app.add_subcommand("lcoe", "nuclear projection and historic LCOE tables");
    lcoe_cmd->add_option("datadir", data_dir, "directory with the cost data files")->required();

    CLI11_PARSE(app, argc, argv);

    enplan::runner::RunOptions options;
    options.out_dir = out_dir;
    options.export_mps = export_mps;
    options.verbose = verbose;
    options.threads = threads;

    if (run_cmd->parsed()) {
        auto result = enplan::runner::run(scenario_path, options);
        if (result.exit_code == enplan::runner::ExitOk) {
            std::cout << "status: " << result.message << "\n"
                      << "objective: " << result.objective << " m$/yr\n"
                      << "iterations: " << result.iterations << "\n"
                      << "reports: " << result.output_dir.string() << "\n";
        } else {
            std::cerr << "run failed (" << result.exit_code << "): " << result.message << "\n";
        }
        return result.exit_code;
    }
    if (sweep_cmd->parsed()) {
        auto result = enplan::runner::sweep(sweep_path, options);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        if (result.exit_code == enplan::runner::ExitOk) {
            std::cout << "cells: " << result.cells.size() << "\n"
                      << "table: " << (result.output_dir / "sweep.csv").string() << "\n";
        } else {
            std::cerr << "sweep failed: " << result.message << "\n";
        }
        return result.exit_code;
    }
    auto result = enplan::runner::lcoe_report(data_dir, options);
    for (const auto& d : result.diagnostics) std::cerr << "row diagnostic: " << d << "\n";
    if (result.exit_code == enplan::runner::ExitOk)
        std::cout << "tables: " << result.output_dir.string() << "\n";
    return result.exit_code;
}
