#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spp/core/domain.hpp"

namespace spp::datagen {

struct SplitConfig {
    std::string mode = "random";  // "random" | "seen_unseen"
    double train_ratio = 0.9;     // random mode
    /// seen_unseen: the held-out letters. Empty means pick 4 feasibly by seed.
    std::vector<core::Letter> unseen;
    int min_train_words = 4;
    int min_test_words = 1;

    bool operator==(const SplitConfig&) const = default;
};

struct SplitManifest {
    std::string name;
    std::vector<std::string> train_words;
    std::vector<std::string> test_words;
    std::vector<core::Letter> unseen_letters;  // empty for the random split

    bool operator==(const SplitManifest&) const = default;
};

/// Word-level partition. random: shuffled split at train_ratio. seen_unseen:
/// train words use only seen letters, every test word contains an unseen one.
/// Throws InvalidWord for bad entries/duplicates, InfeasibleSplit when the
/// letter choice starves either side.
SplitManifest build_splits(const std::vector<std::string>& words, const SplitConfig& cfg,
                           std::uint64_t seed);

std::vector<std::string> read_word_list(const std::string& path);

}  // namespace spp::datagen
