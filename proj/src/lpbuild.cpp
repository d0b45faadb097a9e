#include "enplan/lpbuild.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace enplan::lpbuild {

namespace {

using system::EnergySystem;
using system::ScenarioConfig;
using timegrid::Level;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string step_tag(std::size_t k) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%06zu", k);
    return buf;
}

struct SiteVars {
    int cap = -1;
    int gen0 = -1;  // first of steps(level) contiguous generation variables
    Level level = Level::Hour;
    const system::CapacitySite* site = nullptr;
};

struct StorageVars {
    int pcap = -1, ecap = -1;
    int ch0 = -1, dis0 = -1, lvl0 = -1;
    Level level = Level::Hour;
    const system::StorageSite* site = nullptr;
};

struct DedicatedVars {
    bool present = false;
    int pcap = -1, ecap = -1;
    int ch0 = -1, dis0 = -1, lvl0 = -1;
};

struct LinkVars {
    int ecap_fixed = -1;
    int exp0 = -1;
    int fwd0 = -1, bwd0 = -1;
    Level level = Level::Hour;
};

struct BevVars {
    int fleet = -1;
    int chg0 = -1;
};

class Builder {
public:
    Builder(const EnergySystem& sys, const ScenarioConfig& scen) : sys_(sys), scen_(scen) {}

    lp::LpInstance run() {
        lp_.name = scen_.name;
        index_entities();
        discover_participants();
        check_servable_demand();
        create_variables();
        create_balance_rows();
        add_tech_rows_and_entries();
        add_storage_rows();
        add_dedicated_rows();
        add_link_rows();
        add_supply_rows();
        add_bev_rows();
        add_proportional_rows();
        add_flex_fixing_rows();
        return std::move(lp_);
    }

private:
    // --- shared lookups -------------------------------------------------

    int carrier_index(const std::string& name) const {
        for (std::size_t i = 0; i < sys_.carriers.size(); ++i)
            if (sys_.carriers[i].name == name) return static_cast<int>(i);
        throw BuildError("unknown carrier '" + name + "'");
    }

    int region_index(const std::string& id) const {
        for (std::size_t i = 0; i < sys_.regions.size(); ++i)
            if (sys_.regions[i].id == id) return static_cast<int>(i);
        throw BuildError("unknown region '" + id + "'");
    }

    int mapped_region(const std::string& site_region, int carrier) const {
        const auto& c = sys_.carriers[static_cast<std::size_t>(carrier)];
        const system::Region* r = sys_.ancestor(site_region, c.spatial);
        if (r == nullptr)
            throw BuildError("region '" + site_region + "' has no ancestor at the " +
                             std::string(system::spatial_name(c.spatial)) + " level of carrier '" +
                             c.name + "'");
        return region_index(r->id);
    }

    double weight_of_block(std::size_t block, Level level) const {
        return sys_.time.weight_at(block * static_cast<std::size_t>(timegrid::block_hours(level)));
    }

    // Mean hourly profile value over one fine step; flat 1.0 without profile.
    double profile_mean(const std::string& profile, std::size_t step, Level level) const {
        if (profile.empty()) return 1.0;
        const auto* p = sys_.find_profile(profile);
        if (p == nullptr) throw BuildError("missing profile '" + profile + "'");
        int bh = timegrid::block_hours(level);
        double acc = 0.0;
        for (int k = 0; k < bh; ++k)
            acc += p->values.at(step * static_cast<std::size_t>(bh) + static_cast<std::size_t>(k));
        return acc / bh;
    }

    void index_entities() {
        for (std::size_t d = 0; d < sys_.demands.size(); ++d) {
            const auto& seg = sys_.demands[d];
            if (seg.flexibility == system::FlexKind::ProportionalHeat) {
                std::vector<int> servers;
                for (std::size_t t = 0; t < sys_.techs.size(); ++t)
                    if (sys_.techs[t].serves_segment == seg.id) servers.push_back(static_cast<int>(t));
                segment_servers_[static_cast<int>(d)] = servers;
            }
        }
    }

    // --- participant discovery -------------------------------------------

    void mark(std::map<std::pair<int, int>, int>& m, int carrier, int region, int bit) {
        m[{carrier, region}] |= bit;
    }

    void discover_participants() {
        constexpr int kProducer = 1, kConsumer = 2, kOther = 4;
        auto& part = participation_;
        for (const auto& t : sys_.techs) {
            for (const auto& site : t.sites) {
                for (const auto& [cn, coef] : t.outputs) {
                    if (!t.serves_segment.empty() && serves_carrier(t, cn)) continue;
                    int c = carrier_index(cn);
                    mark(part, c, mapped_region(site.region, c), kProducer);
                }
                for (const auto& [cn, coef] : t.inputs) {
                    int c = carrier_index(cn);
                    mark(part, c, mapped_region(site.region, c), kConsumer);
                }
            }
        }
        for (const auto& s : sys_.storages) {
            if (s.dedicated_only) continue;
            int c = carrier_index(s.carrier);
            for (const auto& site : s.sites) mark(part, c, mapped_region(site.region, c), kOther);
        }
        for (const auto& gl : sys_.links) {
            int c = carrier_index(gl.carrier);
            int a = mapped_region(gl.link.from, c);
            int b = mapped_region(gl.link.to, c);
            mark(part, c, a, kProducer | kConsumer);
            mark(part, c, b, kProducer | kConsumer);
        }
        for (const auto& s : sys_.supplies) {
            int c = carrier_index(s.carrier);
            mark(part, c, mapped_region(s.region, c), kProducer);
        }
        for (const auto& d : sys_.demands) {
            if (d.flexibility == system::FlexKind::ProportionalHeat) continue;
            if (d.flexibility == system::FlexKind::Bev) {
                int e = electricity_index();
                mark(part, e, mapped_region(d.region, e), kConsumer);
                continue;
            }
            if (d.annual_gwh > 0.0) mark(part, carrier_index(d.carrier), region_index(d.region), kConsumer);
        }
    }

    bool serves_carrier(const system::ConversionTech& t, const std::string& carrier) const {
        for (const auto& d : sys_.demands)
            if (d.id == t.serves_segment) return d.carrier == carrier;
        return false;
    }

    int electricity_index() const {
        for (std::size_t i = 0; i < sys_.carriers.size(); ++i)
            if (sys_.carriers[i].name == "electricity") return static_cast<int>(i);
        throw BuildError("BEV demand needs an 'electricity' carrier");
    }

    void check_servable_demand() {
        for (const auto& d : sys_.demands) {
            if (d.flexibility == system::FlexKind::ProportionalHeat) continue;
            if (d.flexibility == system::FlexKind::Bev) continue;
            if (d.annual_gwh <= 0.0) continue;
            auto it = participation_.find({carrier_index(d.carrier), region_index(d.region)});
            if (it == participation_.end() || (it->second & 1) == 0)
                throw BuildError("demand on carrier '" + d.carrier + "' in region '" + d.region +
                                 "' has no producing technology, import or link");
        }
    }

    // --- variable creation -------------------------------------------------

    void create_variables() {
        // Technologies.
        for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
            const auto& tech = sys_.techs[t];
            Level lt = system::tech_resolution(sys_, tech);
            for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                const auto& site = tech.sites[s];
                SiteVars v;
                v.level = lt;
                v.site = &site;
                lp::VarKey key{lp::VariableKind::Capacity, tech.name, site.region, -1, ""};
                v.cap = lp_.add_variable("cap|" + tech.name + "|" + site.region, site.min_gw,
                                         site.max_gw, tech.capex_annuity + tech.fixed_om, key,
                                         static_cast<int>(tech.cost_family));
                std::size_t steps = sys_.time.steps(lt);
                double hf = timegrid::block_hours(lt);
                for (std::size_t k = 0; k < steps; ++k) {
                    double w = weight_of_block(k, lt);
                    lp::VarKey gk{lp::VariableKind::Generation, tech.name, site.region,
                                  static_cast<long>(k), ""};
                    int idx = lp_.add_variable("gen|" + tech.name + "|" + site.region + "|" + step_tag(k),
                                               0.0, kInf, tech.variable_om * hf * w / 1000.0, gk,
                                               static_cast<int>(tech.cost_family));
                    if (k == 0) v.gen0 = idx;
                }
                tech_vars_[{static_cast<int>(t), static_cast<int>(s)}] = v;
            }
        }
        // Storage.
        for (std::size_t s = 0; s < sys_.storages.size(); ++s) {
            const auto& st = sys_.storages[s];
            if (st.dedicated_only) continue;
            int c = carrier_index(st.carrier);
            Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
            bool disabled = st.flex_family == system::FlexFamily::Heat && !scen_.flexibility.heat;
            for (std::size_t i = 0; i < st.sites.size(); ++i) {
                const auto& site = st.sites[i];
                StorageVars v;
                v.level = lc;
                v.site = &site;
                int family = static_cast<int>(st.cost_family);
                lp::VarKey pk{lp::VariableKind::Capacity, st.name, site.region, -1, "power"};
                lp::VarKey ek{lp::VariableKind::Capacity, st.name, site.region, -1, "energy"};
                double pmax = disabled ? 0.0 : kInf;
                double emax = disabled ? 0.0 : site.max_energy_gwh;
                v.pcap = lp_.add_variable("scp|" + st.name + "|" + site.region, 0.0, pmax,
                                          st.power_capex_annuity + st.power_om, pk, family);
                v.ecap = lp_.add_variable("sce|" + st.name + "|" + site.region, 0.0, emax,
                                          st.energy_capex_annuity + st.energy_om, ek, family);
                std::size_t steps = sys_.time.steps(lc);
                for (std::size_t k = 0; k < steps; ++k) {
                    lp::VarKey ck{lp::VariableKind::StorageCharge, st.name, site.region,
                                  static_cast<long>(k), ""};
                    lp::VarKey dk{lp::VariableKind::StorageDischarge, st.name, site.region,
                                  static_cast<long>(k), ""};
                    lp::VarKey lk{lp::VariableKind::StorageLevel, st.name, site.region,
                                  static_cast<long>(k), ""};
                    int ci = lp_.add_variable("sch|" + st.name + "|" + site.region + "|" + step_tag(k),
                                              0.0, kInf, 0.0, ck, -1);
                    lp_.add_variable("sdi|" + st.name + "|" + site.region + "|" + step_tag(k), 0.0,
                                     kInf, 0.0, dk, -1);
                    lp_.add_variable("slv|" + st.name + "|" + site.region + "|" + step_tag(k), 0.0,
                                     kInf, 0.0, lk, -1);
                    if (k == 0) {
                        v.ch0 = ci;
                        v.dis0 = ci + 1;
                        v.lvl0 = ci + 2;
                    }
                }
                storage_vars_[{static_cast<int>(s), static_cast<int>(i)}] = v;
            }
        }
        // Dedicated storage instances for proportional techs.
        for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
            const auto& tech = sys_.techs[t];
            if (tech.dedicated_storage.empty() || tech.serves_segment.empty()) continue;
            if (!scen_.flexibility.heat) continue;
            const auto* st = sys_.find_storage(tech.dedicated_storage);
            if (st == nullptr) throw BuildError("unknown dedicated storage '" + tech.dedicated_storage + "'");
            int segc = -1;
            for (const auto& d : sys_.demands)
                if (d.id == tech.serves_segment) segc = carrier_index(d.carrier);
            if (segc < 0) throw BuildError("unknown segment '" + tech.serves_segment + "'");
            Level lc = sys_.carriers[static_cast<std::size_t>(segc)].temporal;
            for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                const auto& site = tech.sites[s];
                DedicatedVars v;
                v.present = true;
                std::string id = tech.name + "." + st->name;
                int family = static_cast<int>(st->cost_family);
                lp::VarKey pk{lp::VariableKind::Capacity, id, site.region, -1, "power"};
                lp::VarKey ek{lp::VariableKind::Capacity, id, site.region, -1, "energy"};
                v.pcap = lp_.add_variable("dcp|" + id + "|" + site.region, 0.0, kInf,
                                          st->power_capex_annuity + st->power_om, pk, family);
                v.ecap = lp_.add_variable("dce|" + id + "|" + site.region, 0.0, kInf,
                                          st->energy_capex_annuity + st->energy_om, ek, family);
                std::size_t steps = sys_.time.steps(lc);
                for (std::size_t k = 0; k < steps; ++k) {
                    lp::VarKey ck{lp::VariableKind::StorageCharge, id, site.region,
                                  static_cast<long>(k), ""};
                    lp::VarKey dk{lp::VariableKind::StorageDischarge, id, site.region,
                                  static_cast<long>(k), ""};
                    lp::VarKey lk{lp::VariableKind::StorageLevel, id, site.region,
                                  static_cast<long>(k), ""};
                    int ci = lp_.add_variable("dch|" + id + "|" + site.region + "|" + step_tag(k),
                                              0.0, kInf, 0.0, ck, -1);
                    lp_.add_variable("ddi|" + id + "|" + site.region + "|" + step_tag(k), 0.0, kInf,
                                     0.0, dk, -1);
                    lp_.add_variable("dlv|" + id + "|" + site.region + "|" + step_tag(k), 0.0, kInf,
                                     0.0, lk, -1);
                    if (k == 0) {
                        v.ch0 = ci;
                        v.dis0 = ci + 1;
                        v.lvl0 = ci + 2;
                    }
                }
                dedicated_vars_[{static_cast<int>(t), static_cast<int>(s)}] = v;
            }
        }
        // Links.
        for (std::size_t l = 0; l < sys_.links.size(); ++l) {
            const auto& gl = sys_.links[l];
            int c = carrier_index(gl.carrier);
            Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
            LinkVars v;
            v.level = lc;
            bool truck = gl.link.kind == network::LinkKind::TruckTrade;
            if (!truck) {
                if (gl.link.fixed_om_per_gw_yr > 0.0) {
                    lp::VarKey kk{lp::VariableKind::LinkExpansionStep, gl.link.id, "", -1,
                                  "existing"};
                    v.ecap_fixed = lp_.add_variable(
                        "lfx|" + gl.link.id, gl.link.existing_capacity_gw,
                        gl.link.existing_capacity_gw, gl.link.fixed_om_per_gw_yr, kk,
                        static_cast<int>(system::CostFamily::Grid));
                }
                for (std::size_t s = 0; s < gl.link.expansion_steps.size(); ++s) {
                    const auto& step = gl.link.expansion_steps[s];
                    lp::VarKey kk{lp::VariableKind::LinkExpansionStep, gl.link.id, "",
                                  static_cast<long>(s), ""};
                    int idx = lp_.add_variable("exp|" + gl.link.id + "|s" + std::to_string(s), 0.0,
                                               step.max_add_gw, step.cost_per_gw_yr, kk,
                                               static_cast<int>(system::CostFamily::Grid));
                    if (s == 0) v.exp0 = idx;
                }
            }
            std::size_t steps = sys_.time.steps(lc);
            double hc = timegrid::block_hours(lc);
            for (std::size_t k = 0; k < steps; ++k) {
                double w = weight_of_block(k, lc);
                double obj = gl.link.variable_cost_per_mwh * hc * w / 1000.0;
                lp::VarKey fk{lp::VariableKind::Flow, gl.link.id, "", static_cast<long>(k), "f"};
                int fi = lp_.add_variable("flw|" + gl.link.id + "|f|" + step_tag(k), 0.0, kInf, obj,
                                          fk, obj != 0.0 ? static_cast<int>(system::CostFamily::Grid) : -1);
                if (k == 0) v.fwd0 = fi;
                if (gl.link.bidirectional) {
                    lp::VarKey bk{lp::VariableKind::Flow, gl.link.id, "", static_cast<long>(k), "b"};
                    int bi = lp_.add_variable("flw|" + gl.link.id + "|b|" + step_tag(k), 0.0, kInf,
                                              obj, bk,
                                              obj != 0.0 ? static_cast<int>(system::CostFamily::Grid) : -1);
                    if (k == 0) v.bwd0 = bi;
                }
            }
            link_vars_[static_cast<int>(l)] = v;
        }
        // Supplies.
        for (std::size_t s = 0; s < sys_.supplies.size(); ++s) {
            const auto& sup = sys_.supplies[s];
            int c = carrier_index(sup.carrier);
            Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
            std::size_t steps = sys_.time.steps(lc);
            for (std::size_t k = 0; k < steps; ++k) {
                double w = weight_of_block(k, lc);
                lp::VarKey kk{lp::VariableKind::ImportQuantity, sup.id, sup.region,
                              static_cast<long>(k), ""};
                int idx = lp_.add_variable("sup|" + sup.id + "|" + step_tag(k), 0.0, kInf,
                                           sup.cost_per_mwh * w / 1000.0, kk,
                                           static_cast<int>(sup.cost_family));
                if (k == 0) supply_base_[static_cast<int>(s)] = idx;
            }
        }
        // BEV fleets and charging.
        for (std::size_t d = 0; d < sys_.demands.size(); ++d) {
            const auto& seg = sys_.demands[d];
            if (seg.flexibility != system::FlexKind::Bev) continue;
            const auto& bev = seg.bev.value();
            BevVars v;
            std::vector<double> daily = bev_daily_energy(seg);
            double fleet_min = 0.0;
            for (double e : daily) fleet_min = std::max(fleet_min, e / bev.vehicle_daily_kwh);
            lp::VarKey fk{lp::VariableKind::Capacity, seg.id, seg.region, -1, "fleet"};
            v.fleet = lp_.add_variable("bfl|" + seg.id, fleet_min, kInf, bev.fleet_cost, fk,
                                       static_cast<int>(system::CostFamily::Flexibility));
            const auto* avail = sys_.find_profile(bev.availability_profile);
            if (avail == nullptr || avail->level != Level::Hour)
                throw BuildError("BEV segment '" + seg.id + "' needs an hourly availability profile");
            for (std::size_t h = 0; h < sys_.time.hours(); ++h) {
                double lo = 0.0, hi = kInf;
                if (!scen_.flexibility.bev) {
                    // Fixed reference schedule proportional to availability.
                    std::size_t day = h / 24;
                    double asum = 0.0;
                    for (std::size_t hh = day * 24; hh < day * 24 + 24; ++hh)
                        asum += avail->values[hh];
                    if (asum <= 0.0 && daily[day] > 0.0)
                        throw BuildError("BEV segment '" + seg.id +
                                         "' has an all-zero availability day but positive demand");
                    double val = asum > 0.0 ? daily[day] * avail->values[h] / asum : 0.0;
                    lo = hi = val;
                }
                lp::VarKey ck{lp::VariableKind::DemandServed, seg.id, seg.region,
                              static_cast<long>(h), "charge"};
                int idx = lp_.add_variable("bch|" + seg.id + "|" + step_tag(h), lo, hi, 0.0, ck, -1);
                if (h == 0) v.chg0 = idx;
            }
            bev_vars_[static_cast<int>(d)] = v;
        }
        // Proportional serve shares.
        for (std::size_t d = 0; d < sys_.demands.size(); ++d) {
            const auto& seg = sys_.demands[d];
            if (seg.flexibility != system::FlexKind::ProportionalHeat) continue;
            const auto& servers = segment_servers_.at(static_cast<int>(d));
            for (int t : servers) {
                lp::VarKey kk{lp::VariableKind::DemandServed, seg.id, seg.region, -1,
                              sys_.techs[static_cast<std::size_t>(t)].name};
                share_vars_[{static_cast<int>(d), t}] = lp_.add_variable(
                    "shr|" + seg.id + "|" + sys_.techs[static_cast<std::size_t>(t)].name, 0.0, 1.0,
                    0.0, kk, -1);
            }
        }
    }

    // Representative energy per day of one BEV segment, GWh.
    std::vector<double> bev_daily_energy(const system::DemandSegment& seg) const {
        const auto* prof = sys_.find_profile(seg.profile);
        if (prof == nullptr || prof->level != Level::Day)
            throw BuildError("BEV segment '" + seg.id + "' needs a daily demand profile");
        const auto& bev = seg.bev.value();
        std::size_t days = sys_.time.steps(Level::Day);
        std::vector<double> out(days, 0.0);
        for (std::size_t d = 0; d < days; ++d) {
            double w = weight_of_block(d, Level::Day);
            // annual Gpkm * profile / weight -> Gpkm per representative day;
            // times kWh/pkm * 1000 -> GWh.
            out[d] = seg.annual_gwh * prof->values[d] / w * bev.consumption_kwh_per_pkm * 1000.0;
        }
        return out;
    }

    // --- rows ---------------------------------------------------------------

    int balance_row(int carrier, int region, std::size_t block) const {
        auto it = balance_base_.find({carrier, region});
        if (it == balance_base_.end())
            throw BuildError("internal: missing balance for carrier '" +
                             sys_.carriers[static_cast<std::size_t>(carrier)].name + "' region '" +
                             sys_.regions[static_cast<std::size_t>(region)].id + "'");
        return it->second + static_cast<int>(block);
    }

    void create_balance_rows() {
        for (std::size_t c = 0; c < sys_.carriers.size(); ++c) {
            const auto& carrier = sys_.carriers[c];
            std::size_t steps = sys_.time.steps(carrier.temporal);
            for (std::size_t r = 0; r < sys_.regions.size(); ++r) {
                auto it = participation_.find({static_cast<int>(c), static_cast<int>(r)});
                if (it == participation_.end()) continue;
                // Demand energy per block from inflexible segments.
                std::vector<double> demand(steps, 0.0);
                for (const auto& seg : sys_.demands) {
                    if (seg.flexibility != system::FlexKind::Inflexible &&
                        seg.flexibility != system::FlexKind::CoarseBalance)
                        continue;
                    if (seg.carrier != carrier.name || seg.region != sys_.regions[r].id) continue;
                    const auto* prof = sys_.find_profile(seg.profile);
                    if (prof == nullptr) throw BuildError("missing demand profile '" + seg.profile + "'");
                    for (std::size_t b = 0; b < steps; ++b)
                        demand[b] += seg.annual_gwh * prof->values[b] / weight_of_block(b, carrier.temporal);
                }
                int base = -1;
                for (std::size_t b = 0; b < steps; ++b) {
                    lp::RowKey key{lp::RowKind::Balance, carrier.name, sys_.regions[r].id,
                                   static_cast<long>(b), ""};
                    int row = lp_.add_row("bal|" + carrier.name + "|" + sys_.regions[r].id + "|" +
                                              step_tag(b),
                                          lp::Sense::Equal, demand[b], key);
                    if (b == 0) base = row;
                }
                balance_base_[{static_cast<int>(c), static_cast<int>(r)}] = base;
            }
        }
    }

    void add_tech_rows_and_entries() {
        for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
            const auto& tech = sys_.techs[t];
            for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                const auto& v = tech_vars_.at({static_cast<int>(t), static_cast<int>(s)});
                const auto& site = tech.sites[s];
                std::size_t steps = sys_.time.steps(v.level);
                double hf = timegrid::block_hours(v.level);
                for (std::size_t k = 0; k < steps; ++k) {
                    lp::RowKey key{lp::RowKind::CapacityLimit, tech.name, site.region,
                                   static_cast<long>(k), ""};
                    int row = lp_.add_row("cp|" + tech.name + "|" + site.region + "|" + step_tag(k),
                                          lp::Sense::LessEqual, 0.0, key);
                    lp_.add_entry(row, v.gen0 + static_cast<int>(k), 1.0);
                    double cf = tech.availability * profile_mean(site.profile, k, v.level);
                    lp_.add_entry(row, v.cap, -cf);
                    // Balance contributions.
                    std::size_t hour0 = k * static_cast<std::size_t>(timegrid::block_hours(v.level));
                    for (const auto& [cn, coef] : tech.outputs) {
                        if (!tech.serves_segment.empty() && serves_carrier(tech, cn)) continue;
                        int c = carrier_index(cn);
                        Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
                        int row2 = balance_row(c, mapped_region(site.region, c),
                                               sys_.time.block_of(hour0, lc));
                        lp_.add_entry(row2, v.gen0 + static_cast<int>(k), coef * hf);
                    }
                    for (const auto& [cn, coef] : tech.inputs) {
                        int c = carrier_index(cn);
                        Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
                        int row2 = balance_row(c, mapped_region(site.region, c),
                                               sys_.time.block_of(hour0, lc));
                        lp_.add_entry(row2, v.gen0 + static_cast<int>(k), -coef * hf);
                    }
                }
            }
        }
    }

    // Index of the previous step with cyclic wraparound inside the step's
    // representative period.
    std::size_t previous_step(std::size_t k, Level level) const {
        std::size_t bh = static_cast<std::size_t>(timegrid::block_hours(level));
        std::size_t p = sys_.time.period_of(k * bh);
        const auto& per = sys_.time.periods()[p];
        std::size_t first = per.start_hour / bh;
        std::size_t last = (per.start_hour + per.hours) / bh - 1;
        return k == first ? last : k - 1;
    }

    void storage_block(const std::string& prefix, const std::string& id,
                       const std::string& region, Level level, double eff, int pcap, int ecap,
                       int ch0, int dis0, int lvl0, double ep_min, double ep_max) {
        std::size_t steps = sys_.time.steps(level);
        double hc = timegrid::block_hours(level);
        for (std::size_t k = 0; k < steps; ++k) {
            std::size_t prev = previous_step(k, level);
            lp::RowKey key{lp::RowKind::StorageState, id, region, static_cast<long>(k), ""};
            int row = lp_.add_row(prefix + "s|" + id + "|" + region + "|" + step_tag(k),
                                  lp::Sense::Equal, 0.0, key);
            lp_.add_entry(row, lvl0 + 3 * static_cast<int>(k), 1.0);
            lp_.add_entry(row, lvl0 + 3 * static_cast<int>(prev), -1.0);
            lp_.add_entry(row, ch0 + 3 * static_cast<int>(k), -hc * eff);
            lp_.add_entry(row, dis0 + 3 * static_cast<int>(k), hc);

            lp::RowKey ck{lp::RowKind::StorageLimit, id, region, static_cast<long>(k), "charge"};
            int crow = lp_.add_row(prefix + "pc|" + id + "|" + region + "|" + step_tag(k),
                                   lp::Sense::LessEqual, 0.0, ck);
            lp_.add_entry(crow, ch0 + 3 * static_cast<int>(k), 1.0);
            lp_.add_entry(crow, pcap, -1.0);
            lp::RowKey dk{lp::RowKind::StorageLimit, id, region, static_cast<long>(k), "discharge"};
            int drow = lp_.add_row(prefix + "pd|" + id + "|" + region + "|" + step_tag(k),
                                   lp::Sense::LessEqual, 0.0, dk);
            lp_.add_entry(drow, dis0 + 3 * static_cast<int>(k), 1.0);
            lp_.add_entry(drow, pcap, -1.0);
            lp::RowKey ek{lp::RowKind::StorageLimit, id, region, static_cast<long>(k), "level"};
            int erow = lp_.add_row(prefix + "el|" + id + "|" + region + "|" + step_tag(k),
                                   lp::Sense::LessEqual, 0.0, ek);
            lp_.add_entry(erow, lvl0 + 3 * static_cast<int>(k), 1.0);
            lp_.add_entry(erow, ecap, -1.0);
        }
        if (ep_min > 0.0) {
            lp::RowKey key{lp::RowKind::EpRatio, id, region, -1, "min"};
            int row = lp_.add_row(prefix + "rl|" + id + "|" + region, lp::Sense::GreaterEqual, 0.0, key);
            lp_.add_entry(row, ecap, 1.0);
            lp_.add_entry(row, pcap, -ep_min);
        }
        if (std::isfinite(ep_max)) {
            lp::RowKey key{lp::RowKind::EpRatio, id, region, -1, "max"};
            int row = lp_.add_row(prefix + "ru|" + id + "|" + region, lp::Sense::LessEqual, 0.0, key);
            lp_.add_entry(row, ecap, 1.0);
            lp_.add_entry(row, pcap, -ep_max);
        }
    }

    void add_storage_rows() {
        for (std::size_t s = 0; s < sys_.storages.size(); ++s) {
            const auto& st = sys_.storages[s];
            if (st.dedicated_only) continue;
            int c = carrier_index(st.carrier);
            for (std::size_t i = 0; i < st.sites.size(); ++i) {
                const auto& v = storage_vars_.at({static_cast<int>(s), static_cast<int>(i)});
                storage_block("s", st.name, v.site->region, v.level, st.cycle_efficiency, v.pcap,
                              v.ecap, v.ch0, v.dis0, v.lvl0, st.ep_min, st.ep_max);
                // Balance coupling.
                double hc = timegrid::block_hours(v.level);
                int region = mapped_region(v.site->region, c);
                std::size_t steps = sys_.time.steps(v.level);
                for (std::size_t k = 0; k < steps; ++k) {
                    int row = balance_row(c, region, k);
                    lp_.add_entry(row, v.dis0 + 3 * static_cast<int>(k), hc);
                    lp_.add_entry(row, v.ch0 + 3 * static_cast<int>(k), -hc);
                }
            }
        }
    }

    void add_dedicated_rows() {
        for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
            const auto& tech = sys_.techs[t];
            for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                auto it = dedicated_vars_.find({static_cast<int>(t), static_cast<int>(s)});
                if (it == dedicated_vars_.end() || !it->second.present) continue;
                const auto* st = sys_.find_storage(tech.dedicated_storage);
                int segc = -1;
                for (const auto& d : sys_.demands)
                    if (d.id == tech.serves_segment) segc = carrier_index(d.carrier);
                Level lc = sys_.carriers[static_cast<std::size_t>(segc)].temporal;
                const auto& v = it->second;
                storage_block("d", tech.name + "." + st->name, tech.sites[s].region, lc,
                              st->cycle_efficiency, v.pcap, v.ecap, v.ch0, v.dis0, v.lvl0,
                              st->ep_min, st->ep_max);
            }
        }
    }

    void add_link_rows() {
        for (std::size_t l = 0; l < sys_.links.size(); ++l) {
            const auto& gl = sys_.links[l];
            const auto& v = link_vars_.at(static_cast<int>(l));
            int c = carrier_index(gl.carrier);
            int ra = mapped_region(gl.link.from, c);
            int rb = mapped_region(gl.link.to, c);
            double hc = timegrid::block_hours(v.level);
            double tf = gl.link.transfer_factor();
            bool truck = gl.link.kind == network::LinkKind::TruckTrade;
            std::size_t steps = sys_.time.steps(v.level);
            for (std::size_t k = 0; k < steps; ++k) {
                int fwd = v.fwd0 + (gl.link.bidirectional ? 2 : 1) * static_cast<int>(k);
                int bwd = gl.link.bidirectional ? fwd + 1 : -1;
                if (!truck) {
                    lp::RowKey key{lp::RowKind::LinkCapacity, gl.link.id, "", static_cast<long>(k), ""};
                    int row = lp_.add_row("lc|" + gl.link.id + "|" + step_tag(k), lp::Sense::LessEqual,
                                          v.ecap_fixed >= 0 ? 0.0 : gl.link.existing_capacity_gw, key);
                    lp_.add_entry(row, fwd, 1.0);
                    if (bwd >= 0) lp_.add_entry(row, bwd, 1.0);
                    for (std::size_t e = 0; e < gl.link.expansion_steps.size(); ++e)
                        lp_.add_entry(row, v.exp0 + static_cast<int>(e), -1.0);
                    if (v.ecap_fixed >= 0) lp_.add_entry(row, v.ecap_fixed, -1.0);
                }
                int rowa = balance_row(c, ra, k);
                int rowb = balance_row(c, rb, k);
                lp_.add_entry(rowa, fwd, -hc);
                lp_.add_entry(rowb, fwd, hc * tf);
                if (bwd >= 0) {
                    lp_.add_entry(rowb, bwd, -hc);
                    lp_.add_entry(rowa, bwd, hc * tf);
                }
            }
        }
    }

    void add_supply_rows() {
        for (std::size_t s = 0; s < sys_.supplies.size(); ++s) {
            const auto& sup = sys_.supplies[s];
            int c = carrier_index(sup.carrier);
            int region = mapped_region(sup.region, c);
            Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
            std::size_t steps = sys_.time.steps(lc);
            int base = supply_base_.at(static_cast<int>(s));
            for (std::size_t k = 0; k < steps; ++k)
                lp_.add_entry(balance_row(c, region, k), base + static_cast<int>(k), 1.0);
            if (std::isfinite(sup.annual_cap_gwh)) {
                lp::RowKey key{lp::RowKind::AnnualCap, sup.id, sup.region, -1, ""};
                int row = lp_.add_row("ac|" + sup.id, lp::Sense::LessEqual, sup.annual_cap_gwh, key);
                for (std::size_t k = 0; k < steps; ++k)
                    lp_.add_entry(row, base + static_cast<int>(k), weight_of_block(k, lc));
            }
        }
    }

    void add_bev_rows() {
        for (std::size_t d = 0; d < sys_.demands.size(); ++d) {
            const auto& seg = sys_.demands[d];
            if (seg.flexibility != system::FlexKind::Bev) continue;
            const auto& bev = seg.bev.value();
            const auto& v = bev_vars_.at(static_cast<int>(d));
            const auto* avail = sys_.find_profile(bev.availability_profile);
            std::vector<double> daily = bev_daily_energy(seg);
            int e = electricity_index();
            int region = mapped_region(seg.region, e);
            double kappa = bev.charge_kw * bev.safety_margin;  // GW per million vehicles
            for (std::size_t h = 0; h < sys_.time.hours(); ++h) {
                if (scen_.flexibility.bev) {
                    lp::RowKey key{lp::RowKind::ChargeCap, seg.id, seg.region, static_cast<long>(h), ""};
                    int row = lp_.add_row("bc|" + seg.id + "|" + step_tag(h), lp::Sense::LessEqual,
                                          0.0, key);
                    lp_.add_entry(row, v.chg0 + static_cast<int>(h), 1.0);
                    lp_.add_entry(row, v.fleet, -kappa * avail->values[h]);
                }
                lp_.add_entry(balance_row(e, region, h), v.chg0 + static_cast<int>(h), -1.0);
            }
            if (scen_.flexibility.bev) {
                for (std::size_t day = 0; day < sys_.time.steps(Level::Day); ++day) {
                    lp::RowKey key{lp::RowKind::DailyEnergy, seg.id, seg.region,
                                   static_cast<long>(day), ""};
                    int row = lp_.add_row("bd|" + seg.id + "|" + step_tag(day), lp::Sense::Equal,
                                          daily[day], key);
                    for (std::size_t h = day * 24; h < day * 24 + 24; ++h)
                        lp_.add_entry(row, v.chg0 + static_cast<int>(h), 1.0);
                }
            }
        }
    }

    void add_proportional_rows() {
        for (std::size_t d = 0; d < sys_.demands.size(); ++d) {
            const auto& seg = sys_.demands[d];
            if (seg.flexibility != system::FlexKind::ProportionalHeat) continue;
            const auto& servers = segment_servers_.at(static_cast<int>(d));
            if (servers.empty())
                throw BuildError("proportional segment '" + seg.id + "' has no serving technology");
            int c = carrier_index(seg.carrier);
            Level lc = sys_.carriers[static_cast<std::size_t>(c)].temporal;
            double hc = timegrid::block_hours(lc);
            const auto* prof = sys_.find_profile(seg.profile);
            if (prof == nullptr) throw BuildError("missing demand profile '" + seg.profile + "'");

            lp::RowKey sk{lp::RowKind::ServeShare, seg.id, seg.region, -1, ""};
            int srow = lp_.add_row("sv|" + seg.id, lp::Sense::Equal, 1.0, sk);
            for (int t : servers)
                lp_.add_entry(srow, share_vars_.at({static_cast<int>(d), t}), 1.0);

            for (int t : servers) {
                const auto& tech = sys_.techs[static_cast<std::size_t>(t)];
                double out_coef = 0.0;
                auto oit = tech.outputs.find(seg.carrier);
                if (oit != tech.outputs.end()) out_coef = oit->second;
                if (out_coef <= 0.0)
                    throw BuildError("technology '" + tech.name + "' serves segment '" + seg.id +
                                     "' but does not output carrier '" + seg.carrier + "'");
                // Sites of this tech that map into the segment's region.
                std::vector<int> matching;
                for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                    const system::Region* anc = sys_.ancestor(tech.sites[s].region,
                                                              sys_.carriers[(std::size_t)c].spatial);
                    if (anc != nullptr && anc->id == seg.region) matching.push_back(static_cast<int>(s));
                }
                if (matching.empty())
                    throw BuildError("technology '" + tech.name + "' serving segment '" + seg.id +
                                     "' has no site in region '" + seg.region + "'");
                std::size_t blocks = sys_.time.steps(lc);
                for (std::size_t b = 0; b < blocks; ++b) {
                    double demand = seg.annual_gwh * prof->values[b] / weight_of_block(b, lc);
                    lp::RowKey key{lp::RowKind::ServeDelivery, seg.id, tech.name,
                                   static_cast<long>(b), ""};
                    int row = lp_.add_row("sd|" + seg.id + "|" + tech.name + "|" + step_tag(b),
                                          lp::Sense::Equal, 0.0, key);
                    for (int s : matching) {
                        const auto& v = tech_vars_.at({t, s});
                        double hf = timegrid::block_hours(v.level);
                        std::size_t fine_per_block =
                            static_cast<std::size_t>(timegrid::block_hours(lc)) /
                            static_cast<std::size_t>(timegrid::block_hours(v.level));
                        for (std::size_t f = 0; f < fine_per_block; ++f) {
                            std::size_t k = b * fine_per_block + f;
                            lp_.add_entry(row, v.gen0 + static_cast<int>(k), out_coef * hf);
                        }
                        auto dit = dedicated_vars_.find({t, s});
                        if (dit != dedicated_vars_.end() && dit->second.present) {
                            lp_.add_entry(row, dit->second.dis0 + 3 * static_cast<int>(b), hc);
                            lp_.add_entry(row, dit->second.ch0 + 3 * static_cast<int>(b), -hc);
                        }
                    }
                    lp_.add_entry(row, share_vars_.at({static_cast<int>(d), t}), -demand);
                }
            }
        }
    }

    void add_flex_fixing_rows() {
        // Power-to-x off: production held constant across the horizon.
        if (!scen_.flexibility.power_to_x) {
            for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
                const auto& tech = sys_.techs[t];
                if (tech.flex_family != system::FlexFamily::PowerToX) continue;
                for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                    const auto& v = tech_vars_.at({static_cast<int>(t), static_cast<int>(s)});
                    std::size_t steps = sys_.time.steps(v.level);
                    for (std::size_t k = 1; k < steps; ++k) {
                        lp::RowKey key{lp::RowKind::FlexFixing, tech.name, tech.sites[s].region,
                                       static_cast<long>(k), "constant"};
                        int row = lp_.add_row("ff|" + tech.name + "|" + tech.sites[s].region + "|" +
                                                  step_tag(k),
                                              lp::Sense::Equal, 0.0, key);
                        lp_.add_entry(row, v.gen0 + static_cast<int>(k), 1.0);
                        lp_.add_entry(row, v.gen0, -1.0);
                    }
                }
            }
        }
        // Heat off: production uniform within each block of the coarsest
        // output carrier (no intra-block shifting).
        if (!scen_.flexibility.heat) {
            for (std::size_t t = 0; t < sys_.techs.size(); ++t) {
                const auto& tech = sys_.techs[t];
                if (tech.flex_family != system::FlexFamily::Heat) continue;
                Level lout = Level::Hour;
                for (const auto& [cn, coef] : tech.outputs) {
                    const auto* c = sys_.find_carrier(cn);
                    if (c != nullptr && timegrid::block_hours(c->temporal) > timegrid::block_hours(lout))
                        lout = c->temporal;
                }
                for (std::size_t s = 0; s < tech.sites.size(); ++s) {
                    const auto& v = tech_vars_.at({static_cast<int>(t), static_cast<int>(s)});
                    if (timegrid::block_hours(lout) <= timegrid::block_hours(v.level)) continue;
                    std::size_t per_block = static_cast<std::size_t>(timegrid::block_hours(lout)) /
                                            static_cast<std::size_t>(timegrid::block_hours(v.level));
                    std::size_t blocks = sys_.time.steps(lout);
                    for (std::size_t b = 0; b < blocks; ++b) {
                        for (std::size_t f = 1; f < per_block; ++f) {
                            std::size_t k = b * per_block + f;
                            lp::RowKey key{lp::RowKind::FlexFixing, tech.name, tech.sites[s].region,
                                           static_cast<long>(k), "uniform"};
                            int row = lp_.add_row("fu|" + tech.name + "|" + tech.sites[s].region +
                                                      "|" + step_tag(k),
                                                  lp::Sense::Equal, 0.0, key);
                            lp_.add_entry(row, v.gen0 + static_cast<int>(k), 1.0);
                            lp_.add_entry(row, v.gen0 + static_cast<int>(b * per_block), -1.0);
                        }
                    }
                }
            }
        }
    }

    const EnergySystem& sys_;
    const ScenarioConfig& scen_;
    lp::LpInstance lp_;

    std::map<std::pair<int, int>, int> participation_;  // (carrier, region) -> flags
    std::map<std::pair<int, int>, int> balance_base_;   // (carrier, region) -> row of block 0
    std::map<std::pair<int, int>, SiteVars> tech_vars_;
    std::map<std::pair<int, int>, StorageVars> storage_vars_;
    std::map<std::pair<int, int>, DedicatedVars> dedicated_vars_;
    std::map<int, LinkVars> link_vars_;
    std::map<int, int> supply_base_;
    std::map<int, BevVars> bev_vars_;
    std::map<std::pair<int, int>, int> share_vars_;
    std::map<int, std::vector<int>> segment_servers_;
};

}  // namespace

lp::LpInstance build(const EnergySystem& sys, const ScenarioConfig& scenario) {
    Builder b(sys, scenario);
    return b.run();
}

}  // namespace enplan::lpbuild
