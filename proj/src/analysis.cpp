#include "enplan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace enplan::analysis {

namespace {

std::string encode(lp::VariableKind kind, const std::string& entity, const std::string& region,
                   const std::string& aux) {
    std::string s = lp::variable_kind_name(kind);
    s += '|';
    s += entity;
    s += '|';
    s += region;
    s += '|';
    s += aux;
    return s;
}

}  // namespace

const char* residual_variant_name(ResidualVariant v) {
    return v == ResidualVariant::Flexible ? "flexible" : "inflexible";
}

SolutionAnalysis::SolutionAnalysis(const system::EnergySystem& sys,
                                   const system::ScenarioConfig& scenario,
                                   const lp::LpInstance& instance,
                                   const simplex::Solution& solution)
    : sys_(sys), scen_(scenario), lp_(instance), solution_(solution) {
    if (solution.status != simplex::Status::Optimal)
        throw std::runtime_error(std::string("analysis needs an optimal solution, got ") +
                                 simplex::status_name(solution.status));
    for (int j = 0; j < lp_.num_vars(); ++j) {
        const auto& v = lp_.variable(j);
        std::string key = encode(v.key.kind, v.key.entity, v.key.region, v.key.aux);
        if (v.key.step < 0) {
            scalars_[key] = j;
        } else {
            auto& r = ranges_[key];
            if (r.base < 0) r.base = j;
            r.count = std::max(r.count, static_cast<std::size_t>(v.key.step) + 1);
        }
    }
}

const SolutionAnalysis::VarRange* SolutionAnalysis::range(lp::VariableKind kind,
                                                          const std::string& entity,
                                                          const std::string& region,
                                                          const std::string& aux) const {
    auto it = ranges_.find(encode(kind, entity, region, aux));
    return it == ranges_.end() ? nullptr : &it->second;
}

double SolutionAnalysis::capacity(const std::string& tech, const std::string& region) const {
    auto it = scalars_.find(encode(lp::VariableKind::Capacity, tech, region, ""));
    return it == scalars_.end() ? 0.0 : value(it->second);
}

double SolutionAnalysis::total_capacity(const std::string& tech) const {
    const auto* t = sys_.find_tech(tech);
    if (t == nullptr) throw std::runtime_error("unknown technology '" + tech + "'");
    double total = 0.0;
    for (const auto& site : t->sites) total += capacity(tech, site.region);
    return total;
}

double SolutionAnalysis::generation_gw(const std::string& tech, const std::string& region,
                                       std::size_t step) const {
    const auto* r = range(lp::VariableKind::Generation, tech, region, "");
    if (r == nullptr || step >= r->count) return 0.0;
    return value(r->base + static_cast<int>(step));
}

double SolutionAnalysis::hourly_tech_activity(const std::string& tech,
                                              const std::string& site_region,
                                              std::size_t hour) const {
    const auto* t = sys_.find_tech(tech);
    if (t == nullptr) return 0.0;
    timegrid::Level lt = system::tech_resolution(sys_, *t);
    std::size_t k = hour / static_cast<std::size_t>(timegrid::block_hours(lt));
    return generation_gw(tech, site_region, k);
}

double SolutionAnalysis::electricity_output_gwh(const std::string& tech) const {
    const auto* t = sys_.find_tech(tech);
    if (t == nullptr) throw std::runtime_error("unknown technology '" + tech + "'");
    auto oit = t->outputs.find("electricity");
    if (oit == t->outputs.end()) return 0.0;
    timegrid::Level lt = system::tech_resolution(sys_, *t);
    double hf = timegrid::block_hours(lt);
    double total = 0.0;
    for (const auto& site : t->sites) {
        const auto* r = range(lp::VariableKind::Generation, t->name, site.region, "");
        if (r == nullptr) continue;
        for (std::size_t k = 0; k < r->count; ++k) {
            double w = sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(lt)));
            total += w * hf * oit->second * value(r->base + static_cast<int>(k));
        }
    }
    return total;
}

double SolutionAnalysis::generation_share(const std::vector<std::string>& techs) const {
    double total = 0.0;
    for (const auto& t : sys_.techs) total += electricity_output_gwh(t.name);
    if (total <= 0.0) throw std::runtime_error("total electricity generation is zero");
    double group = 0.0;
    for (const auto& name : techs) group += electricity_output_gwh(name);
    return group / total;
}

double SolutionAnalysis::capacity_factor(const std::string& tech) const {
    const auto* t = sys_.find_tech(tech);
    if (t == nullptr) throw std::runtime_error("unknown technology '" + tech + "'");
    double cap = total_capacity(tech);
    if (cap <= 1e-9) throw std::runtime_error("technology '" + tech + "' has no installed capacity");
    timegrid::Level lt = system::tech_resolution(sys_, *t);
    double hf = timegrid::block_hours(lt);
    double energy = 0.0;  // weighted activity-hours
    for (const auto& site : t->sites) {
        const auto* r = range(lp::VariableKind::Generation, t->name, site.region, "");
        if (r == nullptr) continue;
        for (std::size_t k = 0; k < r->count; ++k) {
            double w = sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(lt)));
            energy += w * hf * value(r->base + static_cast<int>(k));
        }
    }
    return energy / (cap * finance::kHoursPerYear);
}

std::map<std::string, double> SolutionAnalysis::cost_decomposition() const {
    std::map<std::string, double> out;
    for (int f = 0; f < 5; ++f) out[system::cost_family_name(static_cast<system::CostFamily>(f))] = 0.0;
    for (int j = 0; j < lp_.num_vars(); ++j) {
        const auto& v = lp_.variable(j);
        if (v.objective == 0.0) continue;
        if (v.cost_family < 0)
            throw std::runtime_error("cost-bearing variable '" + v.name + "' has no cost family");
        out[system::cost_family_name(static_cast<system::CostFamily>(v.cost_family))] +=
            v.objective * value(j);
    }
    return out;
}

std::map<std::string, double> SolutionAnalysis::cost_delta(const SolutionAnalysis& a,
                                                           const SolutionAnalysis& b) {
    auto ca = a.cost_decomposition();
    auto cb = b.cost_decomposition();
    if (a.lp_.num_vars() != b.lp_.num_vars() || a.lp_.num_rows() != b.lp_.num_rows())
        throw std::runtime_error("cost delta requires solutions of the same system shape");
    std::map<std::string, double> out;
    for (const auto& [k, v] : ca) out[k] = cb.at(k) - v;
    return out;
}

ResidualLoadCurve SolutionAnalysis::residual_load(const std::string& region,
                                                  ResidualVariant variant) const {
    const system::Carrier* elec = sys_.find_carrier("electricity");
    if (elec == nullptr) throw std::runtime_error("system has no electricity carrier");
    const system::Region* reg = sys_.find_region(region);
    if (reg == nullptr) throw std::runtime_error("unknown region '" + region + "'");

    std::size_t hours = sys_.time.hours();
    std::vector<double> residual(hours, 0.0);

    auto in_region = [&](const std::string& site_region) {
        const system::Region* anc = sys_.ancestor(site_region, elec->spatial);
        return anc != nullptr && anc->id == region;
    };

    // Inflexible final demand for electricity.
    for (const auto& seg : sys_.demands) {
        if (seg.carrier != "electricity") continue;
        if (seg.flexibility != system::FlexKind::Inflexible &&
            seg.flexibility != system::FlexKind::CoarseBalance)
            continue;
        if (seg.region != region) continue;
        const auto* prof = sys_.find_profile(seg.profile);
        if (prof == nullptr) continue;
        for (std::size_t h = 0; h < hours; ++h)
            residual[h] += seg.annual_gwh * prof->values[h] / sys_.time.weight_at(h);
    }

    // Technology draws and fluctuating supply.
    for (const auto& t : sys_.techs) {
        auto iit = t.inputs.find("electricity");
        auto oit = t.outputs.find("electricity");
        for (const auto& site : t.sites) {
            if (!in_region(site.region)) continue;
            if (iit != t.inputs.end()) {
                double coef = iit->second;
                bool constant = variant == ResidualVariant::Inflexible &&
                                t.flex_family == system::FlexFamily::PowerToX;
                bool uniform = variant == ResidualVariant::Inflexible &&
                               t.flex_family == system::FlexFamily::Heat;
                if (constant) {
                    // Annual-average draw at constant power.
                    double energy = 0.0;
                    for (std::size_t h = 0; h < hours; ++h)
                        energy += sys_.time.weight_at(h) *
                                  hourly_tech_activity(t.name, site.region, h);
                    double avg = energy / finance::kHoursPerYear;
                    for (std::size_t h = 0; h < hours; ++h) residual[h] += coef * avg;
                } else if (uniform) {
                    timegrid::Level lout = timegrid::Level::Hour;
                    for (const auto& [cn, cv] : t.outputs) {
                        const auto* c = sys_.find_carrier(cn);
                        if (c != nullptr &&
                            timegrid::block_hours(c->temporal) > timegrid::block_hours(lout))
                            lout = c->temporal;
                    }
                    int bh = timegrid::block_hours(lout);
                    for (std::size_t h = 0; h < hours; ++h) {
                        std::size_t b0 = h / static_cast<std::size_t>(bh) * static_cast<std::size_t>(bh);
                        double acc = 0.0;
                        for (int i = 0; i < bh; ++i)
                            acc += hourly_tech_activity(t.name, site.region, b0 + static_cast<std::size_t>(i));
                        residual[h] += coef * acc / bh;
                    }
                } else {
                    for (std::size_t h = 0; h < hours; ++h)
                        residual[h] += coef * hourly_tech_activity(t.name, site.region, h);
                }
            }
            if (oit != t.outputs.end() && t.fluctuating) {
                for (std::size_t h = 0; h < hours; ++h)
                    residual[h] -= oit->second * hourly_tech_activity(t.name, site.region, h);
            }
        }
    }

    // BEV charging.
    for (const auto& seg : sys_.demands) {
        if (seg.flexibility != system::FlexKind::Bev) continue;
        const system::Region* anc = sys_.ancestor(seg.region, elec->spatial);
        if (anc == nullptr || anc->id != region) continue;
        const auto* r = range(lp::VariableKind::DemandServed, seg.id, seg.region, "charge");
        if (r == nullptr) continue;
        if (variant == ResidualVariant::Flexible) {
            for (std::size_t h = 0; h < hours && h < r->count; ++h)
                residual[h] += value(r->base + static_cast<int>(h));
        } else {
            const auto& bev = seg.bev.value();
            const auto* avail = sys_.find_profile(bev.availability_profile);
            for (std::size_t day = 0; day < sys_.time.steps(timegrid::Level::Day); ++day) {
                double energy = 0.0, asum = 0.0;
                for (std::size_t h = day * 24; h < day * 24 + 24; ++h) {
                    energy += value(r->base + static_cast<int>(h));
                    asum += avail->values[h];
                }
                for (std::size_t h = day * 24; h < day * 24 + 24; ++h)
                    residual[h] += asum > 0.0 ? energy * avail->values[h] / asum : energy / 24.0;
            }
        }
    }

    ResidualLoadCurve curve;
    curve.region = region;
    curve.variant = variant;
    for (std::size_t h = 0; h < hours; ++h) {
        double w = sys_.time.weight_at(h);
        if (residual[h] > 0.0) curve.demand_above_twh += w * residual[h] / 1000.0;
        else curve.excess_below_twh += w * residual[h] / 1000.0;
    }
    std::sort(residual.begin(), residual.end(), std::greater<double>());
    curve.sorted_gw = std::move(residual);
    curve.peak_gw = curve.sorted_gw.empty() ? 0.0 : curve.sorted_gw.front();
    return curve;
}

std::vector<SankeyEdge> SolutionAnalysis::sankey_flows() const {
    std::vector<SankeyEdge> edges;
    auto push = [&edges](const std::string& from, const std::string& to, double gwh) {
        if (gwh > 1e-9) edges.push_back({from, to, gwh / 1000.0});
    };

    for (const auto& t : sys_.techs) {
        timegrid::Level lt = system::tech_resolution(sys_, t);
        double hf = timegrid::block_hours(lt);
        std::map<std::string, double> in_gwh, out_gwh;
        for (const auto& site : t.sites) {
            const auto* r = range(lp::VariableKind::Generation, t.name, site.region, "");
            if (r == nullptr) continue;
            double activity = 0.0;
            for (std::size_t k = 0; k < r->count; ++k) {
                double w = sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(lt)));
                activity += w * hf * value(r->base + static_cast<int>(k));
            }
            for (const auto& [c, coef] : t.inputs) in_gwh[c] += coef * activity;
            for (const auto& [c, coef] : t.outputs) out_gwh[c] += coef * activity;
        }
        for (const auto& [c, e] : in_gwh) push(c, t.name, e);
        for (const auto& [c, e] : out_gwh) push(t.name, c, e);
    }
    for (const auto& st : sys_.storages) {
        if (st.dedicated_only) continue;
        const auto* c = sys_.find_carrier(st.carrier);
        if (c == nullptr) continue;
        double hc = timegrid::block_hours(c->temporal);
        double charged = 0.0, discharged = 0.0;
        for (const auto& site : st.sites) {
            const auto* rc = range(lp::VariableKind::StorageCharge, st.name, site.region, "");
            const auto* rd = range(lp::VariableKind::StorageDischarge, st.name, site.region, "");
            if (rc != nullptr)
                for (std::size_t k = 0; k < rc->count; ++k)
                    charged += sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(c->temporal))) *
                               hc * value(rc->base + static_cast<int>(k));
            if (rd != nullptr)
                for (std::size_t k = 0; k < rd->count; ++k)
                    discharged += sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(c->temporal))) *
                                  hc * value(rd->base + static_cast<int>(k));
        }
        push(st.carrier, st.name, charged);
        push(st.name, st.carrier, discharged);
    }
    for (const auto& sup : sys_.supplies) {
        const auto* c = sys_.find_carrier(sup.carrier);
        if (c == nullptr) continue;
        const auto* r = range(lp::VariableKind::ImportQuantity, sup.id, sup.region, "");
        if (r == nullptr) continue;
        double total = 0.0;
        for (std::size_t k = 0; k < r->count; ++k)
            total += sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(c->temporal))) *
                     value(r->base + static_cast<int>(k));
        push(sup.id, sup.carrier, total);
    }
    for (const auto& seg : sys_.demands) {
        if (seg.flexibility == system::FlexKind::Bev) {
            const auto* r = range(lp::VariableKind::DemandServed, seg.id, seg.region, "charge");
            if (r == nullptr) continue;
            double total = 0.0;
            for (std::size_t h = 0; h < r->count; ++h)
                total += sys_.time.weight_at(h) * value(r->base + static_cast<int>(h));
            push("electricity", seg.id, total);
        } else {
            push(seg.carrier, seg.id, seg.annual_gwh);
        }
    }
    return edges;
}

std::string SolutionAnalysis::sankey_json() const {
    auto edges = sankey_flows();
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0) os << ",";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f", edges[i].twh);
        os << "{\"from\":\"" << edges[i].from << "\",\"to\":\"" << edges[i].to
           << "\",\"twh\":" << buf << "}";
    }
    os << "]";
    return os.str();
}

double SolutionAnalysis::max_balance_residual_ratio() const {
    // Peak demand per (carrier, region) from balance right-hand sides.
    std::map<std::pair<std::string, std::string>, double> peak;
    for (int i = 0; i < lp_.num_rows(); ++i) {
        const auto& r = lp_.row(i);
        if (r.key.kind != lp::RowKind::Balance) continue;
        auto& p = peak[{r.key.entity, r.key.region}];
        p = std::max(p, std::abs(r.rhs));
    }
    double worst = 0.0;
    for (int i = 0; i < lp_.num_rows(); ++i) {
        const auto& r = lp_.row(i);
        if (r.key.kind != lp::RowKind::Balance) continue;
        double residual = std::abs(solution_.row_activity[static_cast<std::size_t>(i)] - r.rhs);
        double p = peak[{r.key.entity, r.key.region}];
        worst = std::max(worst, residual / std::max(p, 1e-6));
    }
    return worst;
}

std::pair<double, double> SolutionAnalysis::storage_throughput(const std::string& storage) const {
    const auto* st = sys_.find_storage(storage);
    if (st == nullptr) throw std::runtime_error("unknown storage '" + storage + "'");
    const auto* c = sys_.find_carrier(st->carrier);
    double hc = timegrid::block_hours(c->temporal);
    double charged = 0.0, discharged = 0.0;
    for (const auto& site : st->sites) {
        const auto* rc = range(lp::VariableKind::StorageCharge, st->name, site.region, "");
        const auto* rd = range(lp::VariableKind::StorageDischarge, st->name, site.region, "");
        if (rc != nullptr)
            for (std::size_t k = 0; k < rc->count; ++k)
                charged += sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(c->temporal))) *
                           hc * value(rc->base + static_cast<int>(k));
        if (rd != nullptr)
            for (std::size_t k = 0; k < rd->count; ++k)
                discharged += sys_.time.weight_at(k * static_cast<std::size_t>(timegrid::block_hours(c->temporal))) *
                              hc * value(rd->base + static_cast<int>(k));
    }
    return {charged, discharged};
}

}  // namespace enplan::analysis
