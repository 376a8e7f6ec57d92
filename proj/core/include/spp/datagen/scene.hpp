#pragma once

#include <string>
#include <vector>

#include "spp/core/domain.hpp"
#include "spp/datagen/render.hpp"

namespace spp::datagen {

/// Everything the data generator needs; echoed into the dataset manifest.
struct DatagenConfig {
    RenderConfig render;
    float board_jitter = 0.10f;  // fraction of the frame extent, capped by geometry
    int videos_per_word = 2;
    /// Letters never used for distractor tiles (on top of the word's own
    /// letters). The seen/unseen experiment keeps unseen glyphs out of the
    /// training scenes entirely.
    std::vector<core::Letter> distractor_exclude;

    bool operator==(const DatagenConfig&) const = default;
};

/// An initial scene: all 6 tiles in the staging region, empty board.
struct Scene {
    core::SymbolicState state0;
    std::string word;
    std::uint64_t seed = 0;

    bool operator==(const Scene&) const = default;
};

/// Throws InvalidWord unless `word` is 4 distinct uppercase letters.
void validate_word(const std::string& word);

/// Deterministic in (word, seed, config): board pose jittered, 4 word tiles
/// plus 2 distractors at shuffled staging slots, colors uniform per tile.
Scene generate_scene(const std::string& word, std::uint64_t seed, const DatagenConfig& cfg);

/// The staging tile that carries a given letter (unique by construction).
const core::Tile& tile_for_letter(const Scene& scene, core::Letter letter);

}  // namespace spp::datagen
