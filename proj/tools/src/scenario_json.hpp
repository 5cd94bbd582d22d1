#pragma once

#include <string>

#include "sparsevb/bench.hpp"

namespace sparsevb::cli {

// Loads a ScenarioSpec from a JSON file. The schema is strict: required
// fields n, p, s, design, signal, placement, noise, known_variance,
// replicates, seed; optional lambda; unknown fields are rejected. Violations
// throw InvalidInputError naming the offending field path.
ScenarioSpec load_scenario(const std::string& path);

}  // namespace sparsevb::cli
