// Immutable description of one planning problem: carriers and their
// temporal/spatial resolution, nested regions, conversion and storage
// technologies, grid links, demand segments, and resource supplies.
//
// Units throughout: capacities GW, energies GWh, specific investment m$/GW
// (numerically equal to $/kW), fixed O&M m$/GW/yr, variable cost $/MWh.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enplan/finance.hpp"
#include "enplan/network.hpp"
#include "enplan/timegrid.hpp"

namespace enplan::system {

enum class SpatialLevel { Cluster, Zone, Nation };  // cluster is the finest

const char* spatial_name(SpatialLevel level);
SpatialLevel spatial_from_name(const std::string& name);
/// Finer of two spatial levels (cluster < zone < nation).
SpatialLevel finer_spatial(SpatialLevel a, SpatialLevel b);

struct Carrier {
    std::string name;
    timegrid::Level temporal = timegrid::Level::Hour;
    SpatialLevel spatial = SpatialLevel::Zone;
};

struct Region {
    std::string id;
    SpatialLevel level = SpatialLevel::Zone;
    std::string parent;  // empty for nations
    network::Coordinate centroid;
};

/// Objective family used by the cost decomposition.
enum class CostFamily { Generation, Flexibility, Grid, Backup, Import };
const char* cost_family_name(CostFamily family);
CostFamily cost_family_from_name(const std::string& name);

/// Demand-side flexibility family a technology or storage belongs to,
/// used when a scenario disables one family.
enum class FlexFamily { None, PowerToX, Heat };
FlexFamily flex_family_from_name(const std::string& name);

struct CapacitySite {
    std::string region;
    double min_gw = 0.0;
    double max_gw = 0.0;      // inf allowed
    std::string profile;      // optional hourly capacity-factor profile name
};

struct ConversionTech {
    std::string name;
    std::map<std::string, double> inputs;   // carrier -> coefficient per unit activity
    std::map<std::string, double> outputs;  // carrier -> coefficient per unit activity
    double invest_cost = 0.0;               // m$/GW overnight-style
    int lifetime = 1;                       // years
    double capex_annuity = 0.0;             // m$/GW/yr, filled by annuitize_all
    double fixed_om = 0.0;                  // m$/GW/yr
    double variable_om = 0.0;               // $/MWh of activity
    double availability = 1.0;              // fraction of capacity usable
    bool scenario_financed = false;         // capital terms come from the scenario (nuclear)
    bool fluctuating = false;               // profile-bound renewable
    bool proportional_dispatch = false;     // decentralized heating rule
    std::string serves_segment;             // proportional segment served, if any
    std::string dedicated_storage;          // storage template for proportional techs
    CostFamily cost_family = CostFamily::Generation;
    FlexFamily flex_family = FlexFamily::None;
    std::vector<CapacitySite> sites;
};

struct StorageSite {
    std::string region;
    double max_energy_gwh = 0.0;  // inf allowed (no geological limit)
};

struct StorageTech {
    std::string name;
    std::string carrier;
    double power_invest = 0.0;   // m$/GW
    double energy_invest = 0.0;  // m$/GWh
    int lifetime = 1;
    double power_capex_annuity = 0.0;   // filled by annuitize_all
    double energy_capex_annuity = 0.0;  // filled by annuitize_all
    double power_om = 0.0;              // m$/GW/yr
    double energy_om = 0.0;             // m$/GWh/yr
    double cycle_efficiency = 1.0;
    double ep_min = 0.0;  // energy-to-power ratio bounds, hours
    double ep_max = std::numeric_limits<double>::infinity();
    bool battery = false;        // batteries must keep E/P within [0.1, 10]
    bool dedicated_only = false; // template for per-technology heat storage
    CostFamily cost_family = CostFamily::Flexibility;
    FlexFamily flex_family = FlexFamily::None;
    std::vector<StorageSite> sites;
};

enum class FlexKind { Inflexible, Bev, CoarseBalance, ProportionalHeat };
FlexKind flex_kind_from_name(const std::string& name);
const char* flex_kind_name(FlexKind kind);

struct BevParams {
    double charge_kw = 5.0;               // per vehicle
    double safety_margin = 0.75;          // applied to charging profiles
    double vehicle_daily_kwh = 4.0;       // average driving energy per vehicle and day
    double consumption_kwh_per_pkm = 0.15;
    double fleet_cost = 0.0;              // m$/yr per million vehicles
    std::string availability_profile;     // hourly grid-connection profile
};

struct DemandSegment {
    std::string id;
    std::string carrier;
    std::string region;
    double annual_gwh = 0.0;      // energy carriers GWh; transport Gpkm/Gtkm
    std::string profile;          // profile name at the carrier's temporal level
    FlexKind flexibility = FlexKind::Inflexible;
    std::optional<BevParams> bev;
};

/// Exogenous supply option for a carrier: imports by ship or pipeline,
/// domestic biomass potential. Cost-bearing, optionally capped per year.
struct Supply {
    std::string id;
    std::string carrier;
    std::string region;
    double cost_per_mwh = 0.0;
    double annual_cap_gwh = std::numeric_limits<double>::infinity();
    CostFamily cost_family = CostFamily::Import;
};

struct GridLink {
    network::Link link;
    std::string carrier;
};

struct SolverSettings {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-7;
    long max_iterations = 0;  // 0 = automatic
    bool verbose = false;
};

struct FlexToggles {
    bool bev = true;
    bool power_to_x = true;
    bool heat = true;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string system_dir;
    double nuclear_overnight_cost = 0.0;  // m$/GW ($/kW)
    double nuclear_construction_time = 0.0;
    double interest = 0.05;  // uniform rate for all annuitization
    int nuclear_depreciation = 40;
    std::vector<std::size_t> period_days;
    std::vector<double> period_weights;
    SolverSettings solver;
    FlexToggles flexibility;
    std::string output_dir = "out";
};

struct EnergySystem {
    std::vector<Carrier> carriers;
    std::vector<Region> regions;
    std::vector<ConversionTech> techs;
    std::vector<StorageTech> storages;
    std::vector<GridLink> links;
    std::vector<DemandSegment> demands;
    std::vector<Supply> supplies;
    std::map<std::string, timegrid::ProfileSeries> profiles;
    timegrid::TimeHierarchy time{{1}, {365.0}};

    const Carrier* find_carrier(const std::string& name) const;
    const Region* find_region(const std::string& id) const;
    const ConversionTech* find_tech(const std::string& name) const;
    const StorageTech* find_storage(const std::string& name) const;
    const timegrid::ProfileSeries* find_profile(const std::string& name) const;

    /// Ancestor of `region` at the requested level (the region itself when
    /// already there). Returns nullptr when the chain does not reach it.
    const Region* ancestor(const std::string& region, SpatialLevel level) const;
};

struct Violation {
    std::string code;
    std::string message;
};

/// Structural and invariant checks. Returns an empty list iff the system is
/// well-formed; violations come in deterministic order.
std::vector<Violation> validate(const EnergySystem& system);

/// Finest temporal level among all carriers a technology touches; operation
/// variables live at this level even when balances are coarser.
timegrid::Level tech_resolution(const EnergySystem& system, const ConversionTech& tech);

/// Finest spatial level among all carriers a technology touches; the
/// technology must be sited at or below this level.
SpatialLevel tech_spatial_level(const EnergySystem& system, const ConversionTech& tech);

/// Fills every capex_annuity from the raw investment costs at the scenario
/// interest rate; nuclear-style scenario-financed technologies get interest
/// during construction on top. Idempotent.
void annuitize_all(EnergySystem& system, const ScenarioConfig& scenario);

}  // namespace enplan::system
