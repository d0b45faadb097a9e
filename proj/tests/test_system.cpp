#include <doctest.h>

#include "enplan/system.hpp"
#include "oracles.hpp"
#include "toy_systems.hpp"

using namespace enplan;

TEST_CASE("toy skeleton validates cleanly") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    auto violations = system::validate(sys);
    for (const auto& v : violations) INFO(v.code, ": ", v.message);
    CHECK(violations.empty());
}

TEST_CASE("unknown carrier reference is reported once, naming both sides") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    sys.techs[0].inputs["uranium"] = 1.0;
    auto violations = system::validate(sys);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "tech.carrier");
    CHECK(violations[0].message.find("gen1") != std::string::npos);
    CHECK(violations[0].message.find("uranium") != std::string::npos);
}

TEST_CASE("battery energy-to-power bounds outside [0.1, 10] are violations") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    system::StorageTech battery;
    battery.name = "battery";
    battery.carrier = "electricity";
    battery.lifetime = 18;
    battery.cycle_efficiency = 0.89;
    battery.battery = true;
    battery.ep_min = 0.1;
    battery.ep_max = 12.0;
    battery.sites.push_back({"Z", std::numeric_limits<double>::infinity()});
    sys.storages.push_back(battery);
    auto violations = system::validate(sys);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "storage.battery_ep");
    CHECK(violations[0].message.find("[0.1, 10]") != std::string::npos);
    sys.storages[0].ep_max = 10.0;
    CHECK(system::validate(sys).empty());
}

TEST_CASE("region nesting and centroid issues are caught") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    sys.regions.push_back({"orphan", system::SpatialLevel::Cluster, "", {0.0, 0.0}});
    sys.regions.push_back({"badnest", system::SpatialLevel::Cluster, "EU", {0.0, 0.0}});
    sys.regions.push_back({"badcoord", system::SpatialLevel::Nation, "", {95.0, 0.0}});
    auto violations = system::validate(sys);
    std::vector<std::string> codes;
    for (const auto& v : violations) codes.push_back(v.code);
    CHECK(std::count(codes.begin(), codes.end(), "region.orphan") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "region.nesting") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "region.centroid") == 1);
}

TEST_CASE("demand profile must sum to one at the carrier level") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    sys.profiles["bad_profile"] = toys::profile(timegrid::Level::Hour, std::vector<double>(24, 1.0));
    sys.demands[0].profile = "bad_profile";
    auto violations = system::validate(sys);
    REQUIRE(!violations.empty());
    CHECK(violations[0].code == "demand.profile_sum");
}

TEST_CASE("period weights must scale to a full year") {
    auto scen = toys::scenario_one_day();
    scen.period_weights = {100.0};
    auto sys = toys::single_generator(scen);
    auto violations = system::validate(sys);
    REQUIRE(!violations.empty());
    CHECK(violations.back().code == "time.weights");
}

TEST_CASE("technology temporal resolution is the finest touched level") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::skeleton(scen);
    sys.carriers.push_back({"space_heat", timegrid::Level::FourHour, system::SpatialLevel::Cluster});
    sys.carriers.push_back({"hydrogen", timegrid::Level::Day, system::SpatialLevel::Cluster});
    sys.carriers.push_back({"district_heat", timegrid::Level::FourHour, system::SpatialLevel::Cluster});

    system::ConversionTech heat_pump;
    heat_pump.name = "heat_pump";
    heat_pump.inputs["electricity"] = 1.0 / 3.0;
    heat_pump.outputs["space_heat"] = 1.0;
    CHECK(system::tech_resolution(sys, heat_pump) == timegrid::Level::Hour);

    system::ConversionTech h2_boiler;
    h2_boiler.name = "h2_boiler";
    h2_boiler.inputs["hydrogen"] = 1.111;
    h2_boiler.outputs["space_heat"] = 1.0;
    CHECK(system::tech_resolution(sys, h2_boiler) == timegrid::Level::FourHour);

    system::ConversionTech electrolyzer;
    electrolyzer.name = "electrolyzer";
    electrolyzer.inputs["electricity"] = 1.0;
    electrolyzer.outputs["hydrogen"] = 0.7;
    electrolyzer.outputs["district_heat"] = 0.1;
    CHECK(system::tech_resolution(sys, electrolyzer) == timegrid::Level::Hour);

    // Spatially the finest level wins too: cluster here.
    CHECK(system::tech_spatial_level(sys, electrolyzer) == system::SpatialLevel::Cluster);
}

TEST_CASE("siting must be at or below the finest carrier level") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::skeleton(scen);
    sys.carriers.push_back({"hydrogen", timegrid::Level::Day, system::SpatialLevel::Cluster});
    system::ConversionTech e;
    e.name = "electrolyzer";
    e.inputs["electricity"] = 1.0;
    e.outputs["hydrogen"] = 0.7;
    e.lifetime = 20;
    e.sites.push_back({"Z", 0.0, 1.0, ""});  // zone is coarser than cluster
    sys.techs.push_back(e);
    auto violations = system::validate(sys);
    REQUIRE(!violations.empty());
    CHECK(violations[0].code == "tech.siting");
    sys.techs[0].sites[0].region = "C";
    CHECK(system::validate(sys).empty());
}

TEST_CASE("annuitize_all fills annuities and is idempotent") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::single_generator(scen);
    // Wind-style entry: 963.1 m$/GW over 30 years at 5%.
    sys.techs.push_back(toys::generator("wind", 963.1, 30, 11.3, 0.0, 1.0, "Z", 10.0));
    sys.techs[1].fluctuating = true;

    system::ConversionTech nuclear = toys::generator("nuclear", 0.0, 1, 88.81, 10.96, 0.95, "Z",
                                                     std::numeric_limits<double>::infinity());
    nuclear.scenario_financed = true;
    sys.techs.push_back(nuclear);

    system::annuitize_all(sys, scen);
    double crf30 = static_cast<double>(oracles::crf(0.05L, 30));
    CHECK(crf30 == doctest::Approx(0.06505).epsilon(1e-3));
    CHECK(sys.techs[1].capex_annuity == doctest::Approx(62.65).epsilon(1e-3));
    CHECK(sys.techs[1].capex_annuity == doctest::Approx(963.1 * crf30).epsilon(1e-12));

    // Nuclear annuity matches the finance chain for the scenario parameters.
    double f = finance::idc(scen.interest, scen.nuclear_construction_time,
                            scen.nuclear_overnight_cost);
    double expect = finance::annuity(f, scen.nuclear_overnight_cost, scen.interest,
                                     scen.nuclear_depreciation);
    CHECK(sys.techs[2].capex_annuity == doctest::Approx(expect).epsilon(1e-12));
    finance::CostAssumption a{scen.nuclear_overnight_cost, scen.interest,
                              scen.nuclear_construction_time, scen.nuclear_depreciation,
                              88.81, 10.96, 0.95};
    CHECK(sys.techs[2].capex_annuity == doctest::Approx(finance::full_lcoe(a).annuity).epsilon(1e-12));

    auto before = sys.techs[1].capex_annuity;
    system::annuitize_all(sys, scen);
    CHECK(sys.techs[1].capex_annuity == before);

    // Zero-interest limit: capex / lifetime.
    auto scen0 = scen;
    scen0.interest = 0.0;
    system::EnergySystem sys0 = toys::single_generator(scen0);
    sys0.techs.push_back(toys::generator("flat", 250.0, 25, 0.0, 0.0, 1.0, "Z", 1.0));
    system::annuitize_all(sys0, scen0);
    CHECK(sys0.techs[1].capex_annuity == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("ancestor walks the region chain") {
    auto scen = toys::scenario_one_day();
    auto sys = toys::skeleton(scen);
    CHECK(sys.ancestor("C", system::SpatialLevel::Zone)->id == "Z");
    CHECK(sys.ancestor("C", system::SpatialLevel::Nation)->id == "EU");
    CHECK(sys.ancestor("Z", system::SpatialLevel::Zone)->id == "Z");
    CHECK(sys.ancestor("Z", system::SpatialLevel::Cluster) == nullptr);
}
