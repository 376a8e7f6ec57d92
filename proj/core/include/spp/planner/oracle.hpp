#pragma once

#include <string>

#include "spp/core/domain.hpp"
#include "spp/datagen/scene.hpp"

namespace spp::planner {

/// Scene-aware planner: emits a valid 4-instruction plan spelling `word`
/// with the colors the scene assigns to each letter. Placement order is a
/// seed-dependent permutation; the first placed letter targets its absolute
/// quarter, later ones go relative whenever a neighbor is already down.
/// Always valid (throws InvalidWord only when the scene lacks a letter).
core::Plan oracle_plan(const std::string& word, const datagen::Scene& scene, std::uint64_t seed);

}  // namespace spp::planner
