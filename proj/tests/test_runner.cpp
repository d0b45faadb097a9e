#include <doctest.h>

#include <fstream>
#include <sstream>

#include "enplan/runner.hpp"

using namespace enplan;

namespace {
const std::filesystem::path kSource = ENPLAN_SOURCE_DIR;
const std::filesystem::path kToy = kSource / "data" / "toy" / "scenario.toml";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("enplan_test_" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}
}  // namespace

TEST_CASE("toy scenario solves to optimal with reports") {
    runner::RunOptions opt;
    opt.out_dir = fresh_dir("run").string();
    opt.export_mps = true;
    auto result = runner::run(kToy, opt);
    INFO(result.message);
    REQUIRE(result.exit_code == runner::ExitOk);
    CHECK(result.status == simplex::Status::Optimal);
    for (const char* name : {"summary.json", "shares.csv", "capacities.csv",
                             "residual_curves.csv", "sankey.json", "model_summary.json",
                             "model.mps", "model_names.csv"})
        CHECK(std::filesystem::exists(result.output_dir / name));
}

TEST_CASE("repeated runs produce byte-identical reports") {
    runner::RunOptions opt1;
    opt1.out_dir = fresh_dir("det1").string();
    opt1.export_mps = true;
    runner::RunOptions opt2;
    opt2.out_dir = fresh_dir("det2").string();
    opt2.export_mps = true;
    auto r1 = runner::run(kToy, opt1);
    auto r2 = runner::run(kToy, opt2);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    for (const char* name : {"summary.json", "shares.csv", "capacities.csv",
                             "residual_curves.csv", "sankey.json", "model.mps"})
        CHECK(slurp(r1.output_dir / name) == slurp(r2.output_dir / name));
}

TEST_CASE("structural summary counts match the documented formulas") {
    auto solved = runner::solve_scenario(kToy);
    const auto& sys = solved.system;
    std::size_t hours = sys.time.hours();

    // Generation variables: one per technology site and step of its level.
    std::size_t expect_gen = 0;
    for (const auto& t : sys.techs) {
        auto level = system::tech_resolution(sys, t);
        expect_gen += t.sites.size() * sys.time.steps(level);
    }
    auto vc = solved.instance.variable_counts();
    CHECK(vc.at("generation") == static_cast<int>(expect_gen));

    // Balances: one per carrier, participating region and coarse step.
    // In the toy every declared carrier except the BEV transport carrier
    // and the proportional space-heat carrier has exactly one region.
    std::size_t expect_bal = sys.time.steps(timegrid::Level::Hour)  // electricity
                             + sys.time.steps(timegrid::Level::Day);  // hydrogen
    auto rc = solved.instance.row_counts();
    CHECK(rc.at("balance") == static_cast<int>(expect_bal));

    // BEV: one charge variable per hour plus the fleet.
    CHECK(vc.at("demand_served") >= static_cast<int>(hours));
}

TEST_CASE("scenario with unservable demand exits with the infeasible code") {
    auto dir = fresh_dir("infeasible");
    std::filesystem::create_directories(dir / "system" / "profiles");
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p);
        out << text;
    };
    write(dir / "scenario.toml",
          "[scenario]\nname = \"bad\"\nsystem = \"system\"\n"
          "[horizon]\nperiod_days = [1]\nperiod_weights = [365.0]\n");
    write(dir / "system" / "carriers.csv", "name,temporal_level,spatial_level\nelectricity,hour,zone\n");
    write(dir / "system" / "regions.csv", "id,level,parent,lat,lon\nEU,nation,,50,10\nZ,zone,EU,52,13\n");
    write(dir / "system" / "technologies.csv",
          "name,invest_cost,lifetime,fixed_om,variable_om,availability,cost_family\n"
          "gen1,100,10,5,10,1,generation\n");
    write(dir / "system" / "tech_io.csv", "tech,carrier,direction,coefficient\ngen1,electricity,out,1\n");
    write(dir / "system" / "tech_capacity.csv", "tech,region,min_gw,max_gw,profile\ngen1,Z,0,0.001,\n");
    write(dir / "system" / "demands.csv",
          "id,carrier,region,annual_gwh,profile,flexibility\nbase,electricity,Z,3650,load,inflexible\n");
    std::string prof = "hour\n";
    for (int h = 0; h < 24; ++h) prof += h == 0 ? "1.0\n" : "0.0\n";
    write(dir / "system" / "profiles" / "load.csv", prof);

    runner::RunOptions opt;
    opt.out_dir = (dir / "out").string();
    auto result = runner::run(dir / "scenario.toml", opt);
    CHECK(result.exit_code == runner::ExitInfeasible);
}

TEST_CASE("data errors exit with code 20") {
    runner::RunOptions opt;
    auto result = runner::run("/nonexistent/scenario.toml", opt);
    CHECK(result.exit_code == runner::ExitDataError);
    CHECK(!result.message.empty());
}

TEST_CASE("exit code mapping covers every status") {
    CHECK(runner::exit_code_for(simplex::Status::Optimal) == 0);
    CHECK(runner::exit_code_for(simplex::Status::Infeasible) == 10);
    CHECK(runner::exit_code_for(simplex::Status::Unbounded) == 11);
    CHECK(runner::exit_code_for(simplex::Status::IterationLimit) == 20);
}

TEST_CASE("single-cell sweep matches a plain run") {
    auto dir = fresh_dir("sweep1");
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "single.toml");
        out << "[sweep]\nscenario = \"" << kToy.string() << "\"\n"
            << "overnight_costs = [4000]\nconstruction_times = [7]\n";
    }
    runner::RunOptions opt;
    opt.out_dir = (dir / "out").string();
    auto sw = runner::sweep(dir / "single.toml", opt);
    REQUIRE(sw.exit_code == 0);
    REQUIRE(sw.cells.size() == 1);
    CHECK(sw.cells[0].status == "optimal");
    auto solved = runner::solve_scenario(kToy, 4000.0, 7.0);
    CHECK(sw.cells[0].objective == doctest::Approx(solved.solution.objective).epsilon(1e-9));
    CHECK(std::filesystem::exists(sw.output_dir / "sweep.csv"));
    CHECK(sw.warnings.empty());
}

TEST_CASE("sweep warns outside the reviewed parameter ranges") {
    auto dir = fresh_dir("sweep2");
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "wide.toml");
        out << "[sweep]\nscenario = \"" << kToy.string() << "\"\n"
            << "overnight_costs = [1000]\nconstruction_times = [12]\n";
    }
    runner::RunOptions opt;
    opt.out_dir = (dir / "out").string();
    auto sw = runner::sweep(dir / "wide.toml", opt);
    REQUIRE(sw.exit_code == 0);
    CHECK(sw.warnings.size() == 2);
}

TEST_CASE("lcoe report writes both tables and brackets the projection") {
    runner::RunOptions opt;
    opt.out_dir = fresh_dir("lcoe").string();
    auto result = runner::lcoe_report(kSource / "data" / "finance", opt);
    REQUIRE(result.exit_code == 0);
    CHECK(result.diagnostics.empty());
    CHECK(std::filesystem::exists(result.output_dir / "nuclear_projection.csv"));
    CHECK(std::filesystem::exists(result.output_dir / "historic_lcoe.csv"));
    CHECK(result.nuclear_min == doctest::Approx(36.47).epsilon(1e-3));
    CHECK(result.nuclear_max == doctest::Approx(135.61).epsilon(1e-3));
    // Offshore wind never carries a fuel component: its rows parse cleanly
    // and produce finite values at every interest rate.
    auto text = slurp(result.output_dir / "historic_lcoe.csv");
    CHECK(text.find("wind_offshore") != std::string::npos);
}
