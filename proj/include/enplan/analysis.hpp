// Result metrics derived from a solved instance: generation shares,
// capacity factors, residual-load duration curves (flexible and ex-post
// inflexible), cost decomposition by objective family, and energy-flow
// totals for Sankey-style reporting.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "enplan/lp.hpp"
#include "enplan/simplex.hpp"
#include "enplan/system.hpp"

namespace enplan::analysis {

enum class ResidualVariant { Flexible, Inflexible };
const char* residual_variant_name(ResidualVariant v);

struct ResidualLoadCurve {
    std::string region;
    ResidualVariant variant = ResidualVariant::Flexible;
    std::vector<double> sorted_gw;   // descending
    double peak_gw = 0.0;
    double demand_above_twh = 0.0;   // weighted energy above zero
    double excess_below_twh = 0.0;   // weighted energy below zero (negative)
};

struct SankeyEdge {
    std::string from;
    std::string to;
    double twh = 0.0;
};

/// Read-side binding of a solved scenario. All getters are pure; the class
/// can be shared across threads.
class SolutionAnalysis {
public:
    /// Throws std::runtime_error unless the solution status is optimal.
    SolutionAnalysis(const system::EnergySystem& sys, const system::ScenarioConfig& scenario,
                     const lp::LpInstance& instance, const simplex::Solution& solution);

    double objective() const { return solution_.objective; }

    /// Hourly residual load of one electricity region, sorted descending.
    /// The inflexible variant replaces power-to-x draw by its annual average,
    /// BEV charging by the availability-proportional schedule, and heat-
    /// family draw by its block-uniform average.
    ResidualLoadCurve residual_load(const std::string& region, ResidualVariant variant) const;

    /// Electricity output of the group over total electricity generation,
    /// horizon weights applied. Throws when total generation is zero.
    double generation_share(const std::vector<std::string>& techs) const;

    /// Weighted energy output over capacity * 8760 h, summed across regions.
    /// Throws when no capacity is installed.
    double capacity_factor(const std::string& tech) const;

    /// Objective split by cost family; families partition the objective.
    std::map<std::string, double> cost_decomposition() const;
    static std::map<std::string, double> cost_delta(const SolutionAnalysis& a,
                                                    const SolutionAnalysis& b);

    /// Energy-flow edges in TWh: carrier->technology, technology->carrier,
    /// storage and supply couplings, carrier->demand.
    std::vector<SankeyEdge> sankey_flows() const;
    std::string sankey_json() const;  // 3 decimal places, deterministic order

    /// Largest balance-row residual relative to the regional peak demand.
    double max_balance_residual_ratio() const;

    /// Summed charged/discharged energy of one storage across regions,
    /// weighted GWh.
    std::pair<double, double> storage_throughput(const std::string& storage) const;

    // Raw accessors.
    double capacity(const std::string& tech, const std::string& region) const;
    double total_capacity(const std::string& tech) const;
    double generation_gw(const std::string& tech, const std::string& region,
                         std::size_t step) const;
    /// Weighted annual electricity output of one technology, GWh.
    double electricity_output_gwh(const std::string& tech) const;

    const system::EnergySystem& system() const { return sys_; }
    const simplex::Solution& solution() const { return solution_; }

private:
    struct VarRange {
        int base = -1;
        std::size_t count = 0;
    };
    const VarRange* range(lp::VariableKind kind, const std::string& entity,
                          const std::string& region, const std::string& aux) const;
    double value(int idx) const { return solution_.values[static_cast<std::size_t>(idx)]; }
    double hourly_tech_activity(const std::string& tech, const std::string& site_region,
                                std::size_t hour) const;

    const system::EnergySystem& sys_;
    const system::ScenarioConfig& scen_;
    const lp::LpInstance& lp_;
    const simplex::Solution& solution_;

    std::map<std::string, VarRange> ranges_;  // encoded key -> contiguous block
    std::map<std::string, int> scalars_;      // encoded key -> single variable
};

}  // namespace enplan::analysis
