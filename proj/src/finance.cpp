#include "enplan/finance.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "enplan/csvio.hpp"

namespace enplan::finance {

namespace {

void check_nonnegative(double v, const char* name) {
    if (!(v >= 0.0))
        throw std::domain_error(std::string(name) + " must be nonnegative, got " +
                                std::to_string(v));
}

void check_capacity_factor(double u) {
    if (!(u > 0.0) || u > 1.0)
        throw std::domain_error("capacity factor must be in (0,1], got " + std::to_string(u));
}

}  // namespace

InflationTable InflationTable::from_rows(const std::vector<std::pair<int, double>>& rows) {
    InflationTable t;
    for (const auto& [year, pct] : rows) t.factors_[year] = pct;
    if (t.factors_.empty()) throw std::runtime_error("inflation table is empty");
    return t;
}

InflationTable InflationTable::from_csv(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    std::size_t cy = table.col("year");
    std::size_t cp = table.col("percent");
    std::vector<std::pair<int, double>> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        rows.emplace_back(static_cast<int>(table.integer(r, cy)), table.num(r, cp));
    return from_rows(rows);
}

double InflationTable::factor_percent(int year) const {
    auto it = factors_.find(year);
    if (it == factors_.end())
        throw std::domain_error("no inflation factor for year " + std::to_string(year) +
                                " (table covers " + std::to_string(min_year()) + "-" +
                                std::to_string(max_year()) + ")");
    return it->second;
}

double InflationTable::adjust(const MoneyValue& value) const {
    if (!std::isfinite(value.amount))
        throw std::domain_error("monetary amount must be finite");
    return value.amount * (1.0 + factor_percent(value.year) / 100.0);
}

double idc(double interest, double construction_time, double overnight_cost) {
    check_nonnegative(interest, "interest");
    check_nonnegative(construction_time, "construction time");
    check_nonnegative(overnight_cost, "overnight cost");
    return (interest / 2.0 * construction_time +
            interest * interest / 6.0 * construction_time * construction_time) *
           overnight_cost;
}

double annuity(double idc_cost, double overnight_cost, double interest, int depreciation) {
    check_nonnegative(idc_cost, "financing cost");
    check_nonnegative(overnight_cost, "overnight cost");
    check_nonnegative(interest, "interest");
    if (depreciation < 1)
        throw std::domain_error("depreciation period must be at least 1 year");
    double total = idc_cost + overnight_cost;
    if (interest == 0.0) return total / static_cast<double>(depreciation);
    double growth = std::pow(1.0 + interest, depreciation);
    return total * (growth * interest) / (growth - 1.0);
}

double lcoe(double annuity_per_kw, double fixed_om_per_kw, double variable_per_mwh,
            double capacity_factor) {
    check_capacity_factor(capacity_factor);
    // Yearly generation per kW is u*8760 kWh = u*8.760 MWh.
    double mwh_per_kw_year = capacity_factor * kHoursPerYear / 1000.0;
    return (annuity_per_kw + fixed_om_per_kw) / mwh_per_kw_year + variable_per_mwh;
}

LcoeBreakdown full_lcoe(const CostAssumption& a) {
    check_capacity_factor(a.capacity_factor);
    LcoeBreakdown b;
    b.idc = idc(a.interest, a.construction_time, a.overnight_cost);
    b.annuity = annuity(b.idc, a.overnight_cost, a.interest, a.depreciation);
    b.fixed_om_per_kw = a.fixed_om;
    b.variable_per_mwh = a.variable_om;
    b.lcoe = lcoe(b.annuity, a.fixed_om, a.variable_om, a.capacity_factor);
    return b;
}

double combine_om(double fixed_per_kw, double variable_per_mwh, double capacity_factor) {
    check_capacity_factor(capacity_factor);
    double mwh_per_kw_year = capacity_factor * kHoursPerYear / 1000.0;
    return fixed_per_kw + variable_per_mwh * mwh_per_kw_year;
}

std::pair<double, double> split_om(double combined_per_kw, double ratio_fix_var,
                                   double capacity_factor) {
    check_capacity_factor(capacity_factor);
    check_nonnegative(ratio_fix_var, "fixed/variable ratio");
    double mwh_per_kw_year = capacity_factor * kHoursPerYear / 1000.0;
    double fixed = combined_per_kw * ratio_fix_var / (1.0 + ratio_fix_var);
    double variable = combined_per_kw / ((1.0 + ratio_fix_var) * mwh_per_kw_year);
    return {fixed, variable};
}

double fuel_cost_per_mwh(double heat_rate_btu_per_kwh, double fuel_price_per_mmbtu) {
    // BTU/kWh * $/MMBtu = $/MWh after the 1e6 BTU and 1e3 kWh scales cancel to 1e-3.
    return heat_rate_btu_per_kwh * fuel_price_per_mmbtu / 1000.0;
}

std::pair<double, double> lazard_lcoe(const LazardRow& row, double interest) {
    if (row.heat_rate_low.has_value() != row.fuel_price_low.has_value() ||
        row.heat_rate_high.has_value() != row.fuel_price_high.has_value())
        throw std::domain_error("row " + row.technology + "/" + std::to_string(row.year) +
                                ": heat rate and fuel price must be given together");
    auto one = [&](double capital, double fixed, double variable, std::optional<double> hr,
                   std::optional<double> fp, double cf, int lifetime) {
        double fuel = hr ? fuel_cost_per_mwh(*hr, *fp) : 0.0;
        CostAssumption a;
        a.overnight_cost = capital;
        a.interest = interest;
        a.construction_time = 0.0;  // capital cost already includes construction
        a.depreciation = lifetime;
        a.fixed_om = fixed;
        a.variable_om = variable + fuel;
        a.capacity_factor = cf;
        return full_lcoe(a).lcoe;
    };
    double low = one(row.capital_low, row.fixed_om_low, row.variable_om_low, row.heat_rate_low,
                     row.fuel_price_low, row.cf_low, row.lifetime_low);
    double high = one(row.capital_high, row.fixed_om_high, row.variable_om_high,
                      row.heat_rate_high, row.fuel_price_high, row.cf_high, row.lifetime_high);
    return {low, high};
}

std::vector<SweepCell> sensitivity_sweep(const CostAssumption& base,
                                         const std::vector<double>& interests,
                                         const std::vector<int>& lifetimes) {
    if (interests.empty() || lifetimes.empty())
        throw std::domain_error("sensitivity sweep needs nonempty interest and lifetime lists");
    std::vector<SweepCell> out;
    out.reserve(interests.size() * lifetimes.size());
    for (double i : interests) {
        for (int d : lifetimes) {
            CostAssumption a = base;
            a.interest = i;
            a.depreciation = d;
            out.push_back({i, d, full_lcoe(a)});
        }
    }
    return out;
}

std::vector<LazardRow> read_lazard_inputs(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    std::size_t ct = table.col("technology");
    std::size_t cp = table.col("parameter");
    std::size_t cc = table.col("category");
    // Year columns are everything else that parses as a year.
    std::vector<std::pair<std::size_t, int>> year_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const std::string& h = table.header[c];
        if (h.size() == 4 && h.find_first_not_of("0123456789") == std::string::npos)
            year_cols.emplace_back(c, std::stoi(h));
    }
    if (year_cols.empty()) throw std::runtime_error(path.string() + ": no year columns");

    struct Key {
        std::string tech;
        int year;
        bool operator<(const Key& o) const {
            return tech != o.tech ? tech < o.tech : year < o.year;
        }
    };
    std::map<Key, LazardRow> rows;
    auto set_field = [](LazardRow& r, const std::string& param, bool low, double v) {
        if (param == "capital_cost") (low ? r.capital_low : r.capital_high) = v;
        else if (param == "fixed_om") (low ? r.fixed_om_low : r.fixed_om_high) = v;
        else if (param == "variable_om") (low ? r.variable_om_low : r.variable_om_high) = v;
        else if (param == "heat_rate") (low ? r.heat_rate_low : r.heat_rate_high) = v;
        else if (param == "fuel_price") (low ? r.fuel_price_low : r.fuel_price_high) = v;
        else if (param == "capacity_factor") (low ? r.cf_low : r.cf_high) = v;
        else if (param == "lifetime") (low ? r.lifetime_low : r.lifetime_high) = static_cast<int>(v);
        else throw std::runtime_error("unknown parameter '" + param + "' in historic LCOE inputs");
    };
    std::set<Key> has_capital;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& tech = table.cell(r, ct);
        const std::string& param = table.cell(r, cp);
        const std::string& cat = table.cell(r, cc);
        if (cat != "low" && cat != "high")
            throw std::runtime_error(path.string() + ": category must be low or high, got '" +
                                     cat + "'");
        for (auto [c, year] : year_cols) {
            if (table.empty_cell(r, c)) continue;
            Key k{tech, year};
            LazardRow& row = rows[k];
            row.technology = tech;
            row.year = year;
            set_field(row, param, cat == "low", table.num(r, c));
            if (param == "capital_cost") has_capital.insert(k);
        }
    }
    std::vector<LazardRow> out;
    for (auto& [k, row] : rows)
        if (has_capital.count(k)) out.push_back(row);
    return out;
}

}  // namespace enplan::finance
