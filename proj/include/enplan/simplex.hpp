// Bounded-variable revised simplex for desk-scale instances. Sparse LU
// basis factorization (left-looking, partial pivoting) with a product-form
// eta file and periodic refactorization; two-phase method with a composite
// phase-1 infeasibility objective; Dantzig pricing with a Bland fallback
// after stalling.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "enplan/lp.hpp"

namespace enplan::simplex {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };
const char* status_name(Status status);

struct Tolerances {
    double feasibility = 1e-7;  // absolute bound violation allowed
    double optimality = 1e-7;   // reduced-cost violation allowed
    long max_iterations = 0;    // 0: derived from problem size
    long bland_trigger = 1000;  // stalled iterations before Bland's rule
    bool scale = true;          // geometric-mean equilibration
};

struct IterationSnapshot {
    int phase = 1;
    long iteration = 0;
    double objective = 0.0;      // phase-2 objective of the current iterate
    double infeasibility = 0.0;  // summed bound violations of basic variables
};
using SnapshotFn = std::function<void(const IterationSnapshot&)>;

struct Solution {
    Status status = Status::NumericalFailure;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values;         // structural variable values
    std::vector<double> reduced_costs;  // structural reduced costs
    std::vector<double> row_duals;      // y per row (cost_B' * B^-1)
    std::vector<double> row_activity;   // A x per row
    long iterations = 0;
    double primal_residual = 0.0;  // max constraint/bound violation at exit
};

/// Solves min c'x subject to the instance's rows and bounds.
Solution solve(const lp::LpInstance& instance, const Tolerances& tol = {},
               const SnapshotFn& snapshot = nullptr);

}  // namespace enplan::simplex
