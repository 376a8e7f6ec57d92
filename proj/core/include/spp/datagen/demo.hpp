#pragma once

#include <vector>

#include "spp/datagen/scene.hpp"
#include "spp/image/image.hpp"

namespace spp::datagen {

/// A labeled video: the initial keyframe plus one keyframe per action,
/// the high-level task text, the per-keyframe instruction labels and the
/// symbolic states that back it all.
struct Demonstration {
    std::vector<img::Image> frames;           // 5
    std::string high_level;                   // "Spell the word {WORD}"
    std::vector<std::string> low_level;       // 4 instruction texts
    Scene scene;
    std::vector<core::SymbolicState> states;  // 5, states[0] == scene.state0
};

/// Randomized-order scripted policy over a generated scene.
core::Plan scripted_policy(const Scene& scene, std::uint64_t seed);

/// generate_scene + scripted_policy + symbolic replay + rendering.
/// The result satisfies every Demonstration invariant by construction;
/// the final state spells `word`.
Demonstration generate_demonstration(const std::string& word, std::uint64_t seed,
                                     const DatagenConfig& cfg);

}  // namespace spp::datagen
