// Loads a scenario TOML file and the system directory of CSV tables it
// points at. The schema is documented in the repository README.
#pragma once

#include <filesystem>

#include "enplan/system.hpp"

namespace enplan::system {

/// Parses a scenario file. The `system` key is resolved relative to the
/// file's directory and stored absolute in system_dir.
ScenarioConfig load_scenario(const std::filesystem::path& toml_path);

/// Reads carriers, regions, technologies, storage, links, demands, supplies
/// and profiles from a system directory. Throws std::runtime_error with
/// file context on malformed data; cross-reference problems are left to
/// validate(). Capex annuities are not filled here (see annuitize_all).
EnergySystem load_system(const std::filesystem::path& system_dir,
                         const ScenarioConfig& scenario);

}  // namespace enplan::system
