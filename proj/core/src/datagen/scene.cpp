#include "spp/datagen/scene.hpp"

#include <algorithm>

#include "spp/common/rng.hpp"
#include "spp/core/grammar.hpp"

namespace spp::datagen {

using core::Letter;
using core::Tile;

void validate_word(const std::string& word) {
    if (word.size() != 4) {
        throw InvalidWord("word \"" + word + "\" must have exactly 4 letters");
    }
    for (char c : word) {
        if (c < 'A' || c > 'Z') {
            throw InvalidWord("word \"" + word + "\" contains a non-uppercase-letter character");
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (word[i] == word[j]) {
                throw InvalidWord("word \"" + word + "\" repeats letter " +
                                  std::string(1, word[i]));
            }
        }
    }
}

Scene generate_scene(const std::string& word, std::uint64_t seed, const DatagenConfig& cfg) {
    validate_word(word);
    Rng rng(Rng::mix(Rng::hash_str(word), seed));

    // 2 distractor letters outside the word (and outside the exclusion set).
    std::vector<Letter> pool;
    for (Letter l : core::all_letters()) {
        if (word.find(core::to_char(l)) != std::string::npos) continue;
        if (std::find(cfg.distractor_exclude.begin(), cfg.distractor_exclude.end(), l) !=
            cfg.distractor_exclude.end()) {
            continue;
        }
        pool.push_back(l);
    }
    if (pool.size() < 2) throw InvalidWord("distractor pool exhausted for \"" + word + "\"");
    rng.shuffle(pool);

    std::vector<Letter> letters;
    for (char c : word) letters.push_back(*core::letter_from_char(c));
    letters.push_back(pool[0]);
    letters.push_back(pool[1]);

    // Board pose, jitter capped so the board always stays clear of the
    // staging region and the frame edge.
    core::BoardPose pose;
    const float jx = std::min(cfg.board_jitter * 64.0f, 6.0f);
    const float jy = std::min(cfg.board_jitter * 64.0f, 4.0f);
    pose.cx = 32.0f + static_cast<float>(rng.uniform(-jx, jx));
    pose.cy = 14.0f + static_cast<float>(rng.uniform(-jy, jy));

    // Staging slots on a jittered 3x2 grid; slot order shuffled. Slot pitch
    // exceeds the rotated glyph diameter, so tiles never overlap.
    std::vector<int> slots = {0, 1, 2, 3, 4, 5};
    rng.shuffle(slots);
    const float slot_w = 56.0f / 3.0f;
    const float slot_h = 17.0f;

    Scene scene;
    scene.word = word;
    scene.seed = seed;
    scene.state0.board_pose = pose;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        Tile t;
        t.letter = letters[i];
        t.color = core::all_colors()[rng.uniform_int(core::kNumColors)];
        const int col = slots[i] % 3;
        const int row = slots[i] / 3;
        t.x = 4.0f + slot_w * (static_cast<float>(col) + 0.5f) +
              static_cast<float>(rng.uniform(-2.5, 2.5));
        t.y = 26.0f + slot_h * (static_cast<float>(row) + 0.5f) +
              static_cast<float>(rng.uniform(-2.0, 2.0));
        t.angle = static_cast<float>(rng.uniform(-0.35, 0.35));
        scene.state0.staging.push_back(t);
    }
    return scene;
}

const core::Tile& tile_for_letter(const Scene& scene, core::Letter letter) {
    for (const Tile& t : scene.state0.staging) {
        if (t.letter == letter) return t;
    }
    throw InvalidWord(std::string("scene has no tile for letter ") + core::to_char(letter));
}

}  // namespace spp::datagen
