// Sparse linear program container shared by the model builder and the
// solver: variables with bounds and objective coefficients, constraint rows
// with a sense and right-hand side, and a key mapping every variable and row
// back to the model entity it came from.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace enplan::lp {

enum class VariableKind {
    Capacity,
    Generation,
    StorageCharge,
    StorageDischarge,
    StorageLevel,
    Flow,
    LinkExpansionStep,
    ImportQuantity,
    DemandServed,
};
const char* variable_kind_name(VariableKind kind);

struct VarKey {
    VariableKind kind = VariableKind::Generation;
    std::string entity;  // technology / storage / link / supply / segment
    std::string region;
    long step = -1;   // time step at the variable's own level, -1 for none
    std::string aux;  // direction, expansion step ordinal, power/energy, ...
};

enum class RowKind {
    Balance,
    CapacityLimit,
    StorageState,
    StorageLimit,
    EpRatio,
    LinkCapacity,
    ChargeCap,
    DailyEnergy,
    ServeShare,
    ServeDelivery,
    AnnualCap,
    FlexFixing,
};
const char* row_kind_name(RowKind kind);

struct RowKey {
    RowKind kind = RowKind::Balance;
    std::string entity;
    std::string region;
    long step = -1;
    std::string aux;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    double objective = 0.0;
    VarKey key;
    int cost_family = -1;  // system::CostFamily, -1 when not cost-bearing
};

struct Entry {
    int var = 0;
    double coef = 0.0;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Row {
    std::string name;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
    std::vector<Entry> entries;
    RowKey key;
};

class LpInstance {
public:
    std::string name = "LP";

    int add_variable(const std::string& name, double lower, double upper, double objective,
                     const VarKey& key = {}, int cost_family = -1);
    int add_row(const std::string& name, Sense sense, double rhs, const RowKey& key = {});
    void add_entry(int row, int var, double coef);

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    std::size_t num_nonzeros() const;

    const Variable& variable(int j) const { return vars_[static_cast<std::size_t>(j)]; }
    Variable& variable(int j) { return vars_[static_cast<std::size_t>(j)]; }
    const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
    Row& row(int i) { return rows_[static_cast<std::size_t>(i)]; }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Row>& rows() const { return rows_; }

    /// Index of a variable by name, -1 if unknown.
    int find_variable(const std::string& name) const;
    int find_row(const std::string& name) const;

    /// Structural problems (duplicate names, bad indices, all-zero rows,
    /// inverted bounds); empty when well-formed.
    std::vector<std::string> structural_issues() const;

    /// Variable and row counts by kind, for the structural summary export.
    std::map<std::string, int> variable_counts() const;
    std::map<std::string, int> row_counts() const;
    /// Serialized {"variables":{...},"rows":{...},"nonzeros":N} summary.
    std::string structural_summary_json() const;

private:
    std::vector<Variable> vars_;
    std::vector<Row> rows_;
    std::map<std::string, int> var_index_;
    std::map<std::string, int> row_index_;
};

}  // namespace enplan::lp
