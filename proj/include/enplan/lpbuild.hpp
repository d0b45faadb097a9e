// Translates an EnergySystem plus scenario into a sparse LP: per-carrier
// energy balances at each carrier's own temporal and spatial resolution,
// capacity limits at each technology's finest resolution, storage dynamics
// with cyclic closure per representative period, BEV charging, proportional
// decentralized heating, grid expansion steps, and resource caps.
#pragma once

#include <stdexcept>

#include "enplan/lp.hpp"
#include "enplan/system.hpp"

namespace enplan::lpbuild {

/// Structurally unsatisfiable model (demand nothing can serve, missing
/// profile, unreachable balance region).
class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the LP. Requires validate(system) to be clean and capex annuities
/// to be filled (annuitize_all); variable and row order is deterministic.
lp::LpInstance build(const system::EnergySystem& sys, const system::ScenarioConfig& scenario);

}  // namespace enplan::lpbuild
