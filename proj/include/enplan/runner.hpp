// Scenario orchestration: load -> validate -> annuitize -> build -> solve
// -> analyze -> write reports. Also the overnight-cost x construction-time
// sweep (worker pool, ordered collection) and the LCOE report generator.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "enplan/analysis.hpp"
#include "enplan/simplex.hpp"
#include "enplan/system.hpp"

namespace enplan::runner {

// Process exit codes of the command-line tool.
enum ExitCode : int { ExitOk = 0, ExitInfeasible = 10, ExitUnbounded = 11, ExitDataError = 20 };

int exit_code_for(simplex::Status status);

struct RunOptions {
    std::string out_dir;  // overrides the scenario's output dir when set
    bool export_mps = false;
    bool verbose = false;
    int threads = 1;
};

struct RunResult {
    int exit_code = ExitDataError;
    simplex::Status status = simplex::Status::NumericalFailure;
    double objective = 0.0;
    long iterations = 0;
    std::filesystem::path output_dir;
    std::string message;
};

/// Default output root: $ENPLAN_OUT when set, else the current directory.
std::filesystem::path output_root();

/// Full single-scenario pipeline with report files written on optimal.
RunResult run(const std::filesystem::path& scenario_path, const RunOptions& options);

/// In-memory variant used by tests and the sweep: no files written.
struct SolvedScenario {
    system::EnergySystem system;
    system::ScenarioConfig scenario;
    lp::LpInstance instance;
    simplex::Solution solution;
};
SolvedScenario solve_scenario(const std::filesystem::path& scenario_path,
                              const std::optional<double>& occ_override = std::nullopt,
                              const std::optional<double>& time_override = std::nullopt);

struct SweepSpec {
    std::string scenario_path;
    std::vector<double> overnight_costs;     // $/kW
    std::vector<double> construction_times;  // years
    double interest = 0.05;
    int depreciation = 40;
};
SweepSpec load_sweep(const std::filesystem::path& toml_path);

struct SweepCell {
    double occ = 0.0;
    double time = 0.0;
    std::string status;
    double share = 0.0;        // scenario-financed (nuclear) generation share
    double capacity_factor = 0.0;
    bool has_capacity = false;
    double objective = 0.0;
};

struct SweepResult {
    int exit_code = ExitDataError;
    std::vector<SweepCell> cells;  // row-major: occ outer, time inner
    std::vector<std::string> warnings;
    bool share_nonincreasing_in_occ = true;
    bool share_nonincreasing_in_time = true;
    std::filesystem::path output_dir;
    std::string message;
};
SweepResult sweep(const std::filesystem::path& sweep_path, const RunOptions& options);

struct LcoeReportResult {
    int exit_code = ExitDataError;
    std::filesystem::path output_dir;
    std::vector<std::string> diagnostics;  // per-row problems, run continues
    double nuclear_min = 0.0, nuclear_max = 0.0;  // at 5% / 40 yr
};
LcoeReportResult lcoe_report(const std::filesystem::path& data_dir, const RunOptions& options);

}  // namespace enplan::runner
