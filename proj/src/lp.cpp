#include "enplan/lp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace enplan::lp {

const char* variable_kind_name(VariableKind kind) {
    switch (kind) {
        case VariableKind::Capacity: return "capacity";
        case VariableKind::Generation: return "generation";
        case VariableKind::StorageCharge: return "storage_charge";
        case VariableKind::StorageDischarge: return "storage_discharge";
        case VariableKind::StorageLevel: return "storage_level";
        case VariableKind::Flow: return "flow";
        case VariableKind::LinkExpansionStep: return "link_expansion_step";
        case VariableKind::ImportQuantity: return "import_quantity";
        case VariableKind::DemandServed: return "demand_served";
    }
    return "generation";
}

const char* row_kind_name(RowKind kind) {
    switch (kind) {
        case RowKind::Balance: return "balance";
        case RowKind::CapacityLimit: return "capacity_limit";
        case RowKind::StorageState: return "storage_state";
        case RowKind::StorageLimit: return "storage_limit";
        case RowKind::EpRatio: return "ep_ratio";
        case RowKind::LinkCapacity: return "link_capacity";
        case RowKind::ChargeCap: return "charge_cap";
        case RowKind::DailyEnergy: return "daily_energy";
        case RowKind::ServeShare: return "serve_share";
        case RowKind::ServeDelivery: return "serve_delivery";
        case RowKind::AnnualCap: return "annual_cap";
        case RowKind::FlexFixing: return "flex_fixing";
    }
    return "balance";
}

int LpInstance::add_variable(const std::string& name, double lower, double upper,
                             double objective, const VarKey& key, int cost_family) {
    if (var_index_.count(name))
        throw std::runtime_error("duplicate variable name '" + name + "'");
    int idx = num_vars();
    vars_.push_back({name, lower, upper, objective, key, cost_family});
    var_index_[name] = idx;
    return idx;
}

int LpInstance::add_row(const std::string& name, Sense sense, double rhs, const RowKey& key) {
    if (row_index_.count(name)) throw std::runtime_error("duplicate row name '" + name + "'");
    int idx = num_rows();
    rows_.push_back({name, sense, rhs, {}, key});
    row_index_[name] = idx;
    return idx;
}

void LpInstance::add_entry(int row, int var, double coef) {
    if (row < 0 || row >= num_rows()) throw std::runtime_error("row index out of range");
    if (var < 0 || var >= num_vars()) throw std::runtime_error("variable index out of range");
    if (coef == 0.0) return;
    auto& entries = rows_[static_cast<std::size_t>(row)].entries;
    // Coalesce repeated references to the same variable.
    for (auto& e : entries) {
        if (e.var == var) {
            e.coef += coef;
            return;
        }
    }
    entries.push_back({var, coef});
}

std::size_t LpInstance::num_nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.entries.size();
    return n;
}

int LpInstance::find_variable(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

int LpInstance::find_row(const std::string& name) const {
    auto it = row_index_.find(name);
    return it == row_index_.end() ? -1 : it->second;
}

std::vector<std::string> LpInstance::structural_issues() const {
    std::vector<std::string> out;
    for (const auto& v : vars_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
            out.push_back("variable '" + v.name + "' has invalid bounds");
        if (!std::isfinite(v.objective))
            out.push_back("variable '" + v.name + "' has non-finite objective coefficient");
    }
    for (const auto& r : rows_) {
        if (r.entries.empty()) out.push_back("row '" + r.name + "' has no entries");
        if (!std::isfinite(r.rhs))
            out.push_back("row '" + r.name + "' has non-finite right-hand side");
        bool all_zero = true;
        for (const auto& e : r.entries) {
            if (e.var < 0 || e.var >= num_vars()) {
                out.push_back("row '" + r.name + "' references an undeclared variable");
                all_zero = false;
                break;
            }
            if (e.coef != 0.0) all_zero = false;
            if (!std::isfinite(e.coef))
                out.push_back("row '" + r.name + "' has a non-finite coefficient");
        }
        if (all_zero && !r.entries.empty())
            out.push_back("row '" + r.name + "' has only zero coefficients");
    }
    return out;
}

std::map<std::string, int> LpInstance::variable_counts() const {
    std::map<std::string, int> out;
    for (const auto& v : vars_) out[variable_kind_name(v.key.kind)]++;
    return out;
}

std::map<std::string, int> LpInstance::row_counts() const {
    std::map<std::string, int> out;
    for (const auto& r : rows_) out[row_kind_name(r.key.kind)]++;
    return out;
}

std::string LpInstance::structural_summary_json() const {
    std::ostringstream os;
    auto emit = [&os](const std::map<std::string, int>& counts) {
        os << "{";
        bool first = true;
        for (const auto& [k, v] : counts) {
            if (!first) os << ",";
            os << "\"" << k << "\":" << v;
            first = false;
        }
        os << "}";
    };
    os << "{\"variables\":";
    emit(variable_counts());
    os << ",\"rows\":";
    emit(row_counts());
    os << ",\"num_variables\":" << num_vars();
    os << ",\"num_rows\":" << num_rows();
    os << ",\"nonzeros\":" << num_nonzeros() << "}";
    return os.str();
}

}  // namespace enplan::lp
