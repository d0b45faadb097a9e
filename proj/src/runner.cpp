#include "enplan/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "enplan/csvio.hpp"
#include "enplan/lpbuild.hpp"
#include "enplan/mps.hpp"
#include "enplan/system_io.hpp"
#include "enplan/tomlio.hpp"

namespace enplan::runner {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> nuclear_group(const system::EnergySystem& sys) {
    std::vector<std::string> out;
    for (const auto& t : sys.techs)
        if (t.scenario_financed) out.push_back(t.name);
    return out;
}

simplex::Tolerances tolerances_from(const system::ScenarioConfig& scen) {
    simplex::Tolerances tol;
    tol.feasibility = scen.solver.feasibility_tol;
    tol.optimality = scen.solver.optimality_tol;
    tol.max_iterations = scen.solver.max_iterations;
    return tol;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

int exit_code_for(simplex::Status status) {
    switch (status) {
        case simplex::Status::Optimal: return ExitOk;
        case simplex::Status::Infeasible: return ExitInfeasible;
        case simplex::Status::Unbounded: return ExitUnbounded;
        default: return ExitDataError;
    }
}

std::filesystem::path output_root() {
    const char* env = std::getenv("ENPLAN_OUT");
    return env != nullptr && *env != '\0' ? std::filesystem::path(env)
                                          : std::filesystem::current_path();
}

SolvedScenario solve_scenario(const std::filesystem::path& scenario_path,
                              const std::optional<double>& occ_override,
                              const std::optional<double>& time_override) {
    SolvedScenario out;
    out.scenario = system::load_scenario(scenario_path);
    if (occ_override) out.scenario.nuclear_overnight_cost = *occ_override;
    if (time_override) out.scenario.nuclear_construction_time = *time_override;
    out.system = system::load_system(out.scenario.system_dir, out.scenario);
    auto violations = system::validate(out.system);
    if (!violations.empty()) {
        std::string msg = "system validation failed:";
        for (const auto& v : violations) msg += "\n  [" + v.code + "] " + v.message;
        throw std::runtime_error(msg);
    }
    system::annuitize_all(out.system, out.scenario);
    out.instance = lpbuild::build(out.system, out.scenario);
    out.solution = simplex::solve(out.instance, tolerances_from(out.scenario));
    return out;
}

namespace {

void write_reports(const SolvedScenario& s, const std::filesystem::path& dir,
                   const RunOptions& options) {
    std::filesystem::create_directories(dir);
    analysis::SolutionAnalysis view(s.system, s.scenario, s.instance, s.solution);

    // Structural summary of the model.
    write_text(dir / "model_summary.json", s.instance.structural_summary_json());

    // Scenario summary.
    ordered_json summary;
    summary["scenario"] = s.scenario.name;
    summary["status"] = simplex::status_name(s.solution.status);
    summary["objective_musd_per_year"] = s.solution.objective;
    summary["iterations"] = s.solution.iterations;
    summary["primal_residual"] = s.solution.primal_residual;
    ordered_json families;
    for (const auto& [family, cost] : view.cost_decomposition()) families[family] = cost;
    summary["cost_by_family"] = families;
    ordered_json shares;
    for (const auto& t : s.system.techs) {
        double e = view.electricity_output_gwh(t.name);
        if (e > 0.0) shares[t.name] = view.generation_share({t.name});
    }
    summary["electricity_share"] = shares;
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    // Capacities.
    {
        std::string csv = "tech,region,gw\n";
        for (const auto& t : s.system.techs)
            for (const auto& site : t.sites)
                csv += t.name + "," + site.region + "," +
                       csv::format_double(view.capacity(t.name, site.region)) + "\n";
        write_text(dir / "capacities.csv", csv);
    }
    // Shares and capacity factors.
    {
        std::string csv = "tech,share,capacity_factor\n";
        for (const auto& t : s.system.techs) {
            double cap = view.total_capacity(t.name);
            csv += t.name + "," + csv::format_double(view.generation_share({t.name})) + ",";
            csv += cap > 1e-9 ? csv::format_double(view.capacity_factor(t.name)) : std::string();
            csv += "\n";
        }
        write_text(dir / "shares.csv", csv);
    }
    // Residual-load duration curves for every electricity region.
    {
        const auto* elec = s.system.find_carrier("electricity");
        std::string csv = "region,variant,rank,gw\n";
        if (elec != nullptr) {
            for (const auto& r : s.system.regions) {
                if (r.level != elec->spatial) continue;
                for (auto variant :
                     {analysis::ResidualVariant::Flexible, analysis::ResidualVariant::Inflexible}) {
                    auto curve = view.residual_load(r.id, variant);
                    for (std::size_t i = 0; i < curve.sorted_gw.size(); ++i)
                        csv += r.id + "," + analysis::residual_variant_name(variant) + "," +
                               std::to_string(i) + "," + csv::format_double(curve.sorted_gw[i]) +
                               "\n";
                }
            }
        }
        write_text(dir / "residual_curves.csv", csv);
    }
    write_text(dir / "sankey.json", view.sankey_json() + "\n");

    if (options.export_mps) {
        auto exported = mps::export_mps(s.instance);
        write_text(dir / "model.mps", exported.text);
        std::string map = "mps_name,full_name\n";
        for (const auto& [short_name, full] : exported.names.rows)
            map += short_name + ",row:" + full + "\n";
        for (const auto& [short_name, full] : exported.names.columns)
            map += short_name + ",col:" + full + "\n";
        write_text(dir / "model_names.csv", map);
    }
}

}  // namespace

RunResult run(const std::filesystem::path& scenario_path, const RunOptions& options) {
    RunResult result;
    try {
        SolvedScenario s;
        system::ScenarioConfig pre = system::load_scenario(scenario_path);
        std::filesystem::path dir =
            !options.out_dir.empty() ? std::filesystem::path(options.out_dir)
                                     : output_root() / pre.output_dir;
        if (options.verbose) {
            s.scenario = pre;
            s.system = system::load_system(pre.system_dir, pre);
            auto violations = system::validate(s.system);
            if (!violations.empty()) {
                std::string msg = "system validation failed:";
                for (const auto& v : violations) msg += "\n  [" + v.code + "] " + v.message;
                throw std::runtime_error(msg);
            }
            system::annuitize_all(s.system, s.scenario);
            s.instance = lpbuild::build(s.system, s.scenario);
            std::filesystem::create_directories(dir);
            std::ofstream log(dir / "iterations.log");
            s.solution = simplex::solve(s.instance, tolerances_from(s.scenario),
                                        [&log](const simplex::IterationSnapshot& it) {
                                            log << "phase " << it.phase << " iter " << it.iteration
                                                << " objective " << it.objective
                                                << " infeasibility " << it.infeasibility << "\n";
                                        });
        } else {
            s = solve_scenario(scenario_path);
        }
        result.status = s.solution.status;
        result.objective = s.solution.objective;
        result.iterations = s.solution.iterations;
        result.exit_code = exit_code_for(s.solution.status);
        result.output_dir = dir;
        result.message = simplex::status_name(s.solution.status);
        if (s.solution.status == simplex::Status::Optimal) write_reports(s, dir, options);
    } catch (const std::exception& e) {
        result.exit_code = ExitDataError;
        result.message = e.what();
    }
    return result;
}

SweepSpec load_sweep(const std::filesystem::path& toml_path) {
    auto doc = toml::Document::parse_file(toml_path);
    SweepSpec spec;
    std::filesystem::path base = toml_path.parent_path();
    spec.scenario_path = (base / doc.get_string("sweep.scenario")).lexically_normal().string();
    spec.overnight_costs = doc.get_double_array("sweep.overnight_costs");
    spec.construction_times = doc.get_double_array("sweep.construction_times");
    spec.interest = doc.get_double_or("sweep.interest", 0.05);
    spec.depreciation = static_cast<int>(doc.get_int_or("sweep.depreciation", 40));
    if (spec.overnight_costs.empty() || spec.construction_times.empty())
        throw std::runtime_error(toml_path.string() + ": sweep lists must be nonempty");
    return spec;
}

SweepResult sweep(const std::filesystem::path& sweep_path, const RunOptions& options) {
    SweepResult result;
    SweepSpec spec;
    system::ScenarioConfig base_scenario;
    system::EnergySystem base_system;
    try {
        spec = load_sweep(sweep_path);
        base_scenario = system::load_scenario(spec.scenario_path);
        base_scenario.interest = spec.interest;
        base_scenario.nuclear_depreciation = spec.depreciation;
        base_system = system::load_system(base_scenario.system_dir, base_scenario);
        auto violations = system::validate(base_system);
        if (!violations.empty())
            throw std::runtime_error("system validation failed: " + violations.front().message);
    } catch (const std::exception& e) {
        result.message = e.what();
        return result;
    }
    for (double occ : spec.overnight_costs)
        if (occ < 1914.0 || occ > 12600.0)
            result.warnings.push_back("overnight cost " + csv::format_double(occ) +
                                      " outside the reviewed range [1914, 12600]");
    for (double t : spec.construction_times)
        if (t < 4.0 || t > 10.0)
            result.warnings.push_back("construction time " + csv::format_double(t) +
                                      " outside the reviewed range [4, 10]");

    std::size_t n_occ = spec.overnight_costs.size();
    std::size_t n_time = spec.construction_times.size();
    result.cells.assign(n_occ * n_time, {});

    std::atomic<std::size_t> next{0};
    int threads = std::max(1, options.threads);
    auto worker = [&]() {
        for (;;) {
            std::size_t cell = next.fetch_add(1);
            if (cell >= n_occ * n_time) return;
            std::size_t io = cell / n_time, it = cell % n_time;
            SweepCell out;
            out.occ = spec.overnight_costs[io];
            out.time = spec.construction_times[it];
            try {
                system::ScenarioConfig scen = base_scenario;
                scen.nuclear_overnight_cost = out.occ;
                scen.nuclear_construction_time = out.time;
                system::EnergySystem sys = base_system;  // per-cell copy
                system::annuitize_all(sys, scen);
                lp::LpInstance instance = lpbuild::build(sys, scen);
                simplex::Solution sol = simplex::solve(instance, tolerances_from(scen));
                out.status = simplex::status_name(sol.status);
                out.objective = sol.objective;
                if (sol.status == simplex::Status::Optimal) {
                    analysis::SolutionAnalysis view(sys, scen, instance, sol);
                    auto group = nuclear_group(sys);
                    out.share = view.generation_share(group);
                    double cap = 0.0;
                    for (const auto& name : group) cap += view.total_capacity(name);
                    if (cap > 1e-9 && group.size() == 1) {
                        out.capacity_factor = view.capacity_factor(group.front());
                        out.has_capacity = true;
                    }
                }
            } catch (const std::exception& e) {
                out.status = std::string("error: ") + e.what();
            }
            result.cells[cell] = out;
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Monotonicity diagnostics: share nonincreasing in cost along both axes.
    const double slack = 1e-6;
    for (std::size_t it = 0; it < n_time; ++it)
        for (std::size_t io = 0; io + 1 < n_occ; ++io)
            if (result.cells[(io + 1) * n_time + it].share >
                result.cells[io * n_time + it].share + slack)
                result.share_nonincreasing_in_occ = false;
    for (std::size_t io = 0; io < n_occ; ++io)
        for (std::size_t it = 0; it + 1 < n_time; ++it)
            if (result.cells[io * n_time + it + 1].share >
                result.cells[io * n_time + it].share + slack)
                result.share_nonincreasing_in_time = false;

    try {
        std::filesystem::path dir = !options.out_dir.empty()
                                        ? std::filesystem::path(options.out_dir)
                                        : output_root() / "sweep_out";
        std::filesystem::create_directories(dir);
        std::string csv = "overnight_cost,construction_time,status,nuclear_share,nuclear_cf,objective\n";
        for (const auto& c : result.cells) {
            csv += csv::format_double(c.occ) + "," + csv::format_double(c.time) + "," + c.status +
                   "," + csv::format_double(c.share) + ",";
            csv += c.has_capacity ? csv::format_double(c.capacity_factor) : std::string();
            csv += "," + csv::format_double(c.objective) + "\n";
        }
        csv += std::string("# share_nonincreasing_in_occ=") +
               (result.share_nonincreasing_in_occ ? "yes" : "no") + "\n";
        csv += std::string("# share_nonincreasing_in_time=") +
               (result.share_nonincreasing_in_time ? "yes" : "no") + "\n";
        for (const auto& w : result.warnings) csv += "# warning: " + w + "\n";
        write_text(dir / "sweep.csv", csv);
        result.output_dir = dir;
    } catch (const std::exception& e) {
        result.message = e.what();
        return result;
    }
    result.exit_code = ExitOk;
    return result;
}

LcoeReportResult lcoe_report(const std::filesystem::path& data_dir, const RunOptions& options) {
    LcoeReportResult result;
    try {
        std::filesystem::path dir = !options.out_dir.empty()
                                        ? std::filesystem::path(options.out_dir)
                                        : output_root() / "lcoe_out";
        std::filesystem::create_directories(dir);

        auto params = csv::read_file(data_dir / "nuclear_assumptions.csv");
        auto cp = params.col("parameter");
        auto cv = params.col("value");
        std::map<std::string, double> p;
        for (std::size_t r = 0; r < params.rows.size(); ++r)
            p[params.cell(r, cp)] = params.num(r, cv);

        const std::vector<double> interests{0.0, 0.05, 0.10};
        const std::vector<int> lifetimes{40, 60};
        std::string proj = "interest,depreciation,overnight_cost,construction_time,idc,annuity,lcoe\n";
        for (double i : interests) {
            for (int d : lifetimes) {
                for (double occ : {p.at("overnight_cost_min"), p.at("overnight_cost_max")}) {
                    double t = occ == p.at("overnight_cost_min") ? p.at("construction_time_min")
                                                                 : p.at("construction_time_max");
                    finance::CostAssumption a;
                    a.overnight_cost = occ;
                    a.interest = i;
                    a.construction_time = t;
                    a.depreciation = d;
                    a.fixed_om = p.at("fixed_om");
                    a.variable_om = p.at("variable_om");
                    a.capacity_factor = p.at("capacity_factor");
                    auto b = finance::full_lcoe(a);
                    proj += csv::format_double(i) + "," + std::to_string(d) + "," +
                            csv::format_double(occ) + "," + csv::format_double(t) + "," +
                            csv::format_double(b.idc) + "," + csv::format_double(b.annuity) + "," +
                            csv::format_double(b.lcoe) + "\n";
                    if (i == 0.05 && d == 40) {
                        if (occ == p.at("overnight_cost_min")) result.nuclear_min = b.lcoe;
                        else result.nuclear_max = b.lcoe;
                    }
                }
            }
        }
        write_text(dir / "nuclear_projection.csv", proj);

        auto rows = finance::read_lazard_inputs(data_dir / "lazard_inputs.csv");
        std::string hist = "technology,year,interest,lcoe_low,lcoe_high\n";
        for (const auto& row : rows) {
            for (double i : interests) {
                try {
                    auto [low, high] = finance::lazard_lcoe(row, i);
                    hist += row.technology + "," + std::to_string(row.year) + "," +
                            csv::format_double(i) + "," + csv::format_double(low) + "," +
                            csv::format_double(high) + "\n";
                } catch (const std::exception& e) {
                    result.diagnostics.push_back(row.technology + "/" + std::to_string(row.year) +
                                                 ": " + e.what());
                }
            }
        }
        write_text(dir / "historic_lcoe.csv", hist);
        result.output_dir = dir;
        result.exit_code = ExitOk;
    } catch (const std::exception& e) {
        result.exit_code = ExitDataError;
        result.diagnostics.push_back(e.what());
    }
    return result;
}

}  // namespace enplan::runner
