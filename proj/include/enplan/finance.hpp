// Cost arithmetic for generation technologies: inflation adjustment to a
// US-$2018 base, interest during construction, annuitization, LCOE, and the
// harmonization of fixed/variable O&M figures from heterogeneous sources.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enplan::finance {

constexpr double kHoursPerYear = 8760.0;

/// An amount of money tagged with the currency base year it is stated in.
struct MoneyValue {
    double amount = 0.0;
    int year = 2018;
};

/// Financial parameters of one technology.
struct CostAssumption {
    double overnight_cost = 0.0;    // $/kW
    double interest = 0.0;          // fraction per year
    double construction_time = 0.0; // years
    int depreciation = 1;           // years
    double fixed_om = 0.0;          // $/kW/yr
    double variable_om = 0.0;       // $/MWh, inclusive of fuel
    double capacity_factor = 1.0;   // fraction in (0,1]
};

/// Cost components of one LCOE evaluation, all per kW of capacity except
/// the $/MWh entries.
struct LcoeBreakdown {
    double idc = 0.0;             // $/kW financing cost during construction
    double annuity = 0.0;         // $/kW/yr
    double fixed_om_per_kw = 0.0; // $/kW/yr
    double variable_per_mwh = 0.0;// $/MWh
    double lcoe = 0.0;            // $/MWh
};

/// One technology/year entry of the historized LCOE inputs. Each parameter
/// carries a low and a high estimate; heat rate and fuel price are either
/// both present (fuel-burning plants) or both absent.
struct LazardRow {
    std::string technology;
    int year = 0;
    double capital_low = 0.0, capital_high = 0.0;       // $/kW incl. construction
    double fixed_om_low = 0.0, fixed_om_high = 0.0;     // $/kW/yr
    double variable_om_low = 0.0, variable_om_high = 0.0; // $/MWh
    std::optional<double> heat_rate_low, heat_rate_high;  // BTU/kWh
    std::optional<double> fuel_price_low, fuel_price_high;// $/MMBtu
    double cf_low = 0.0, cf_high = 0.0;                 // fraction
    int lifetime_low = 1, lifetime_high = 1;            // years
};

/// Inflation factors normalized to the 2018 base year, loaded from a CSV
/// with columns year,percent. Years outside the table are rejected.
class InflationTable {
public:
    static InflationTable from_csv(const std::filesystem::path& path);
    static InflationTable from_rows(const std::vector<std::pair<int, double>>& rows);

    /// amount in year's currency -> amount in $2018.
    double adjust(const MoneyValue& value) const;
    double factor_percent(int year) const;
    int min_year() const { return factors_.begin()->first; }
    int max_year() const { return factors_.rbegin()->first; }
    const std::map<int, double>& rows() const { return factors_; }

private:
    std::map<int, double> factors_;  // year -> percent change until 2018
};

// --- Core formulas ---

/// Financing cost accrued during construction: f = (i/2*t + i^2/6*t^2) * c.
double idc(double interest, double construction_time, double overnight_cost);

/// Constant yearly payment equivalent to the upfront sum f + c over d years
/// at interest i. The i = 0 case uses the straight-line limit (f + c) / d.
double annuity(double idc_cost, double overnight_cost, double interest, int depreciation);

/// Levelized cost in $/MWh from an annuity and fixed O&M (both $/kW/yr),
/// variable cost ($/MWh) and a capacity factor.
double lcoe(double annuity_per_kw, double fixed_om_per_kw, double variable_per_mwh,
            double capacity_factor);

/// idc -> annuity -> lcoe chained for one technology.
LcoeBreakdown full_lcoe(const CostAssumption& assumption);

/// Collapses fixed ($/kW/yr) and variable ($/MWh) O&M into one $/kW/yr
/// figure at the given capacity factor.
double combine_om(double fixed_per_kw, double variable_per_mwh, double capacity_factor);

/// Inverse of combine_om for a given fixed/variable cost ratio.
/// Returns (fixed $/kW/yr, variable $/MWh).
std::pair<double, double> split_om(double combined_per_kw, double ratio_fix_var,
                                   double capacity_factor);

/// Recomputed low/high LCOE for one historized input row at a uniform
/// interest rate. Capital costs already include construction, so no
/// additional interest during construction is applied.
std::pair<double, double> lazard_lcoe(const LazardRow& row, double interest);

/// Fuel component in $/MWh from a heat rate (BTU/kWh) and fuel price ($/MMBtu).
double fuel_cost_per_mwh(double heat_rate_btu_per_kwh, double fuel_price_per_mmbtu);

struct SweepCell {
    double interest = 0.0;
    int lifetime = 0;
    LcoeBreakdown breakdown;
};

/// Cartesian interest x lifetime evaluation of full_lcoe.
std::vector<SweepCell> sensitivity_sweep(const CostAssumption& base,
                                         const std::vector<double>& interests,
                                         const std::vector<int>& lifetimes);

/// Reads the historized LCOE input table (long layout: one row per
/// technology/parameter/category with per-year columns).
std::vector<LazardRow> read_lazard_inputs(const std::filesystem::path& path);

}  // namespace enplan::finance
