#include "enplan/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace enplan::system {

const char* spatial_name(SpatialLevel level) {
    switch (level) {
        case SpatialLevel::Cluster: return "cluster";
        case SpatialLevel::Zone: return "zone";
        case SpatialLevel::Nation: return "nation";
    }
    return "zone";
}

SpatialLevel spatial_from_name(const std::string& name) {
    if (name == "cluster") return SpatialLevel::Cluster;
    if (name == "zone") return SpatialLevel::Zone;
    if (name == "nation") return SpatialLevel::Nation;
    throw std::runtime_error("unknown spatial level '" + name + "'");
}

namespace {
int spatial_rank(SpatialLevel level) {
    switch (level) {
        case SpatialLevel::Cluster: return 0;
        case SpatialLevel::Zone: return 1;
        case SpatialLevel::Nation: return 2;
    }
    return 1;
}
}  // namespace

SpatialLevel finer_spatial(SpatialLevel a, SpatialLevel b) {
    return spatial_rank(a) <= spatial_rank(b) ? a : b;
}

const char* cost_family_name(CostFamily family) {
    switch (family) {
        case CostFamily::Generation: return "generation";
        case CostFamily::Flexibility: return "flexibility";
        case CostFamily::Grid: return "grid";
        case CostFamily::Backup: return "backup";
        case CostFamily::Import: return "import";
    }
    return "generation";
}

CostFamily cost_family_from_name(const std::string& name) {
    if (name == "generation") return CostFamily::Generation;
    if (name == "flexibility") return CostFamily::Flexibility;
    if (name == "grid") return CostFamily::Grid;
    if (name == "backup") return CostFamily::Backup;
    if (name == "import") return CostFamily::Import;
    throw std::runtime_error("unknown cost family '" + name + "'");
}

FlexFamily flex_family_from_name(const std::string& name) {
    if (name.empty() || name == "none") return FlexFamily::None;
    if (name == "power_to_x") return FlexFamily::PowerToX;
    if (name == "heat") return FlexFamily::Heat;
    throw std::runtime_error("unknown flexibility family '" + name + "'");
}

FlexKind flex_kind_from_name(const std::string& name) {
    if (name == "inflexible") return FlexKind::Inflexible;
    if (name == "bev") return FlexKind::Bev;
    if (name == "coarse_balance") return FlexKind::CoarseBalance;
    if (name == "proportional_heat") return FlexKind::ProportionalHeat;
    throw std::runtime_error("unknown flexibility kind '" + name + "'");
}

const char* flex_kind_name(FlexKind kind) {
    switch (kind) {
        case FlexKind::Inflexible: return "inflexible";
        case FlexKind::Bev: return "bev";
        case FlexKind::CoarseBalance: return "coarse_balance";
        case FlexKind::ProportionalHeat: return "proportional_heat";
    }
    return "inflexible";
}

const Carrier* EnergySystem::find_carrier(const std::string& name) const {
    for (const auto& c : carriers)
        if (c.name == name) return &c;
    return nullptr;
}

const Region* EnergySystem::find_region(const std::string& id) const {
    for (const auto& r : regions)
        if (r.id == id) return &r;
    return nullptr;
}

const ConversionTech* EnergySystem::find_tech(const std::string& name) const {
    for (const auto& t : techs)
        if (t.name == name) return &t;
    return nullptr;
}

const StorageTech* EnergySystem::find_storage(const std::string& name) const {
    for (const auto& s : storages)
        if (s.name == name) return &s;
    return nullptr;
}

const timegrid::ProfileSeries* EnergySystem::find_profile(const std::string& name) const {
    auto it = profiles.find(name);
    return it == profiles.end() ? nullptr : &it->second;
}

const Region* EnergySystem::ancestor(const std::string& region, SpatialLevel level) const {
    const Region* r = find_region(region);
    int guard = 0;
    while (r != nullptr && guard++ < 16) {
        if (r->level == level) return r;
        if (r->parent.empty()) return nullptr;
        r = find_region(r->parent);
    }
    return nullptr;
}

timegrid::Level tech_resolution(const EnergySystem& system, const ConversionTech& tech) {
    timegrid::Level finest = timegrid::Level::Day;
    auto consider = [&](const std::string& carrier) {
        const Carrier* c = system.find_carrier(carrier);
        if (c != nullptr) finest = timegrid::finer(finest, c->temporal);
    };
    for (const auto& [c, v] : tech.inputs) consider(c);
    for (const auto& [c, v] : tech.outputs) consider(c);
    return finest;
}

SpatialLevel tech_spatial_level(const EnergySystem& system, const ConversionTech& tech) {
    SpatialLevel finest = SpatialLevel::Nation;
    auto consider = [&](const std::string& carrier) {
        const Carrier* c = system.find_carrier(carrier);
        if (c != nullptr) finest = finer_spatial(finest, c->spatial);
    };
    for (const auto& [c, v] : tech.inputs) consider(c);
    for (const auto& [c, v] : tech.outputs) consider(c);
    return finest;
}

namespace {

class Checker {
public:
    explicit Checker(const EnergySystem& s) : sys_(s) {}

    std::vector<Violation> run() {
        check_carriers();
        check_regions();
        check_techs();
        check_storages();
        check_links();
        check_demands();
        check_supplies();
        check_time();
        return std::move(out_);
    }

private:
    void add(const std::string& code, const std::string& message) {
        out_.push_back({code, message});
    }

    void check_carriers() {
        std::set<std::string> seen;
        for (const auto& c : sys_.carriers) {
            if (!seen.insert(c.name).second)
                add("carrier.duplicate", "carrier '" + c.name + "' declared more than once");
        }
        const Carrier* el = sys_.find_carrier("electricity");
        if (el != nullptr && el->temporal != timegrid::Level::Hour)
            add("carrier.electricity_resolution", "electricity must use hourly resolution");
    }

    void check_regions() {
        std::set<std::string> seen;
        for (const auto& r : sys_.regions) {
            if (!seen.insert(r.id).second)
                add("region.duplicate", "region '" + r.id + "' declared more than once");
            if (std::abs(r.centroid.lat_deg) > 90.0 || std::abs(r.centroid.lon_deg) > 180.0)
                add("region.centroid", "region '" + r.id + "' has invalid centroid coordinates");
            if (r.parent.empty()) {
                if (r.level != SpatialLevel::Nation)
                    add("region.orphan", "region '" + r.id + "' below nation level has no parent");
                continue;
            }
            const Region* p = sys_.find_region(r.parent);
            if (p == nullptr) {
                add("region.parent_missing",
                    "region '" + r.id + "' references unknown parent '" + r.parent + "'");
                continue;
            }
            bool ok = (r.level == SpatialLevel::Cluster && p->level == SpatialLevel::Zone) ||
                      (r.level == SpatialLevel::Zone && p->level == SpatialLevel::Nation);
            if (!ok)
                add("region.nesting", "region '" + r.id + "' must nest cluster->zone->nation");
        }
        // Cycle detection over the parent chain.
        for (const auto& r : sys_.regions) {
            const Region* cur = &r;
            int steps = 0;
            while (cur != nullptr && !cur->parent.empty() && steps++ < 8)
                cur = sys_.find_region(cur->parent);
            if (steps >= 8)
                add("region.cycle", "parent chain of region '" + r.id + "' does not terminate");
        }
    }

    void check_profile_ref(const std::string& owner, const std::string& name,
                           timegrid::Level expected, bool capacity_factor) {
        if (name.empty()) return;
        const auto* p = sys_.find_profile(name);
        if (p == nullptr) {
            add("profile.missing", owner + " references unknown profile '" + name + "'");
            return;
        }
        if (p->level != expected)
            add("profile.level", owner + ": profile '" + name + "' is at level " +
                                     timegrid::level_name(p->level) + ", expected " +
                                     timegrid::level_name(expected));
        if (p->values.size() != sys_.time.steps(p->level))
            add("profile.length", owner + ": profile '" + name + "' has " +
                                      std::to_string(p->values.size()) + " values, horizon needs " +
                                      std::to_string(sys_.time.steps(p->level)));
        if (capacity_factor) {
            for (double v : p->values) {
                if (v < 0.0 || v > 1.0 + 1e-6) {
                    add("profile.range",
                        owner + ": capacity-factor profile '" + name + "' outside [0,1]");
                    break;
                }
            }
        }
    }

    void check_techs() {
        for (const auto& t : sys_.techs) {
            if (t.outputs.empty())
                add("tech.no_output", "technology '" + t.name + "' has no output carrier");
            for (const auto& [c, v] : t.inputs) {
                if (sys_.find_carrier(c) == nullptr)
                    add("tech.carrier", "technology '" + t.name + "' references unknown carrier '" +
                                            c + "'");
                if (v <= 0.0)
                    add("tech.coefficient",
                        "technology '" + t.name + "' has nonpositive input coefficient");
            }
            for (const auto& [c, v] : t.outputs) {
                if (sys_.find_carrier(c) == nullptr)
                    add("tech.carrier", "technology '" + t.name + "' references unknown carrier '" +
                                            c + "'");
                if (v <= 0.0)
                    add("tech.coefficient",
                        "technology '" + t.name + "' has nonpositive output coefficient");
            }
            if (t.availability <= 0.0 || t.availability > 1.0)
                add("tech.availability", "technology '" + t.name + "' availability outside (0,1]");
            if (t.lifetime < 1)
                add("tech.lifetime", "technology '" + t.name + "' lifetime below one year");
            SpatialLevel needed = tech_spatial_level(sys_, t);
            for (const auto& site : t.sites) {
                const Region* r = sys_.find_region(site.region);
                if (r == nullptr) {
                    add("tech.region", "technology '" + t.name + "' sited in unknown region '" +
                                           site.region + "'");
                    continue;
                }
                if (spatial_rank(r->level) > spatial_rank(needed))
                    add("tech.siting", "technology '" + t.name + "' in region '" + site.region +
                                           "' must be sited at " + spatial_name(needed) +
                                           " level or finer");
                if (site.min_gw < 0.0 || site.max_gw < site.min_gw)
                    add("tech.capacity_bounds", "technology '" + t.name + "' in region '" +
                                                    site.region + "' has invalid capacity bounds");
                check_profile_ref("technology '" + t.name + "'", site.profile,
                                  timegrid::Level::Hour, true);
            }
            if (!t.serves_segment.empty()) {
                bool found = false;
                for (const auto& d : sys_.demands)
                    if (d.id == t.serves_segment) found = true;
                if (!found)
                    add("tech.segment", "technology '" + t.name +
                                            "' serves unknown demand segment '" +
                                            t.serves_segment + "'");
            }
            if (!t.dedicated_storage.empty() && sys_.find_storage(t.dedicated_storage) == nullptr)
                add("tech.storage", "technology '" + t.name + "' references unknown storage '" +
                                        t.dedicated_storage + "'");
        }
    }

    void check_storages() {
        for (const auto& s : sys_.storages) {
            if (sys_.find_carrier(s.carrier) == nullptr)
                add("storage.carrier",
                    "storage '" + s.name + "' references unknown carrier '" + s.carrier + "'");
            if (s.cycle_efficiency <= 0.0 || s.cycle_efficiency > 1.0)
                add("storage.efficiency", "storage '" + s.name + "' efficiency outside (0,1]");
            if (s.ep_min < 0.0 || s.ep_max < s.ep_min)
                add("storage.ep_bounds", "storage '" + s.name + "' has invalid E/P bounds");
            if (s.battery && (s.ep_min < 0.1 || s.ep_max > 10.0))
                add("storage.battery_ep", "battery storage '" + s.name +
                                              "' E/P ratio bounds must stay within [0.1, 10]");
            for (const auto& site : s.sites) {
                if (sys_.find_region(site.region) == nullptr)
                    add("storage.region", "storage '" + s.name + "' sited in unknown region '" +
                                              site.region + "'");
                if (site.max_energy_gwh < 0.0)
                    add("storage.potential", "storage '" + s.name + "' has negative potential");
            }
        }
    }

    void check_links() {
        for (const auto& gl : sys_.links) {
            const Carrier* c = sys_.find_carrier(gl.carrier);
            if (c == nullptr) {
                add("link.carrier", "link '" + gl.link.id + "' references unknown carrier '" +
                                        gl.carrier + "'");
                continue;
            }
            for (const std::string& end : {gl.link.from, gl.link.to}) {
                const Region* r = sys_.find_region(end);
                if (r == nullptr)
                    add("link.region",
                        "link '" + gl.link.id + "' endpoint '" + end + "' is unknown");
                else if (r->level != c->spatial)
                    add("link.level", "link '" + gl.link.id + "' endpoint '" + end +
                                          "' is not at the carrier's " + spatial_name(c->spatial) +
                                          " level");
            }
            try {
                network::check_link(gl.link);
            } catch (const std::exception& e) {
                add("link.data", e.what());
            }
        }
    }

    void check_demands() {
        std::set<std::string> seen;
        for (const auto& d : sys_.demands) {
            if (!seen.insert(d.id).second)
                add("demand.duplicate", "demand segment '" + d.id + "' declared more than once");
            const Carrier* c = sys_.find_carrier(d.carrier);
            if (c == nullptr) {
                add("demand.carrier",
                    "demand '" + d.id + "' references unknown carrier '" + d.carrier + "'");
                continue;
            }
            const Region* r = sys_.find_region(d.region);
            if (r == nullptr)
                add("demand.region",
                    "demand '" + d.id + "' references unknown region '" + d.region + "'");
            else if (r->level != c->spatial)
                add("demand.level", "demand '" + d.id + "' region '" + d.region +
                                        "' is not at the carrier's level");
            if (d.annual_gwh < 0.0)
                add("demand.total", "demand '" + d.id + "' has negative annual total");
            const auto* p = sys_.find_profile(d.profile);
            if (p == nullptr) {
                add("demand.profile",
                    "demand '" + d.id + "' references unknown profile '" + d.profile + "'");
            } else {
                if (p->level != c->temporal)
                    add("demand.profile_level",
                        "demand '" + d.id + "' profile must be at the carrier's temporal level");
                double sum = 0.0;
                for (double v : p->values) sum += v;
                if (std::abs(sum - 1.0) > 1e-6)
                    add("demand.profile_sum", "demand '" + d.id + "' profile sums to " +
                                                  std::to_string(sum) + ", expected 1");
            }
            if (d.flexibility == FlexKind::Bev) {
                if (!d.bev.has_value())
                    add("demand.bev", "demand '" + d.id + "' is BEV-flexible but has no BEV data");
                else
                    check_profile_ref("BEV segment '" + d.id + "'", d.bev->availability_profile,
                                      timegrid::Level::Hour, true);
            }
            if (d.flexibility == FlexKind::ProportionalHeat) {
                int serving = 0;
                for (const auto& t : sys_.techs)
                    if (t.serves_segment == d.id) ++serving;
                if (serving == 0)
                    add("demand.no_server",
                        "proportional segment '" + d.id + "' has no serving technology");
            }
        }
    }

    void check_supplies() {
        for (const auto& s : sys_.supplies) {
            if (sys_.find_carrier(s.carrier) == nullptr)
                add("supply.carrier",
                    "supply '" + s.id + "' references unknown carrier '" + s.carrier + "'");
            if (sys_.find_region(s.region) == nullptr)
                add("supply.region",
                    "supply '" + s.id + "' references unknown region '" + s.region + "'");
        }
    }

    void check_time() {
        double wh = sys_.time.weighted_hours();
        if (std::abs(wh - finance::kHoursPerYear) > 1e-6 * finance::kHoursPerYear)
            add("time.weights", "period weights scale the horizon to " + std::to_string(wh) +
                                    " hours, expected 8760");
    }

    const EnergySystem& sys_;
    std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const EnergySystem& system) { return Checker(system).run(); }

void annuitize_all(EnergySystem& system, const ScenarioConfig& scenario) {
    double i = scenario.interest;
    for (auto& t : system.techs) {
        if (t.scenario_financed) {
            double occ = scenario.nuclear_overnight_cost;
            double f = finance::idc(i, scenario.nuclear_construction_time, occ);
            t.capex_annuity = finance::annuity(f, occ, i, scenario.nuclear_depreciation);
        } else {
            t.capex_annuity = finance::annuity(0.0, t.invest_cost, i, t.lifetime);
        }
    }
    for (auto& s : system.storages) {
        s.power_capex_annuity = finance::annuity(0.0, s.power_invest, i, s.lifetime);
        s.energy_capex_annuity = finance::annuity(0.0, s.energy_invest, i, s.lifetime);
    }
}

}  // namespace enplan::system
