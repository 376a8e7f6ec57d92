#include "spp/datagen/splits.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "spp/common/rng.hpp"
#include "spp/core/grammar.hpp"
#include "spp/datagen/scene.hpp"

namespace spp::datagen {

namespace {

bool uses_any(const std::string& word, const std::vector<core::Letter>& letters) {
    for (core::Letter l : letters) {
        if (word.find(core::to_char(l)) != std::string::npos) return true;
    }
    return false;
}

SplitManifest partition_by_letters(const std::vector<std::string>& words,
                                   const std::vector<core::Letter>& unseen) {
    SplitManifest m;
    m.name = "seen_unseen";
    m.unseen_letters = unseen;
    for (const std::string& w : words) {
        (uses_any(w, unseen) ? m.test_words : m.train_words).push_back(w);
    }
    return m;
}

}  // namespace

SplitManifest build_splits(const std::vector<std::string>& words, const SplitConfig& cfg,
                           std::uint64_t seed) {
    std::set<std::string> seen_words;
    for (const std::string& w : words) {
        validate_word(w);
        if (!seen_words.insert(w).second) throw InvalidWord("duplicate word \"" + w + "\"");
    }
    Rng rng(Rng::mix(seed, Rng::hash_str(cfg.mode)));

    if (cfg.mode == "random") {
        SplitManifest m;
        m.name = "random";
        std::vector<std::string> shuffled = words;
        rng.shuffle(shuffled);
        const auto n_train = static_cast<std::size_t>(
            std::floor(cfg.train_ratio * static_cast<double>(shuffled.size())));
        m.train_words.assign(shuffled.begin(), shuffled.begin() + n_train);
        m.test_words.assign(shuffled.begin() + n_train, shuffled.end());
        if (static_cast<int>(m.train_words.size()) < cfg.min_train_words ||
            static_cast<int>(m.test_words.size()) < cfg.min_test_words) {
            throw InfeasibleSplit("random split leaves too few words on one side");
        }
        std::sort(m.train_words.begin(), m.train_words.end());
        std::sort(m.test_words.begin(), m.test_words.end());
        return m;
    }

    if (cfg.mode != "seen_unseen") throw ConfigError("unknown split mode \"" + cfg.mode + "\"");

    if (!cfg.unseen.empty()) {
        SplitManifest m = partition_by_letters(words, cfg.unseen);
        if (static_cast<int>(m.train_words.size()) < cfg.min_train_words ||
            static_cast<int>(m.test_words.size()) < cfg.min_test_words) {
            throw InfeasibleSplit("unseen letter choice starves the split (train " +
                                  std::to_string(m.train_words.size()) + ", test " +
                                  std::to_string(m.test_words.size()) + ")");
        }
        std::sort(m.train_words.begin(), m.train_words.end());
        std::sort(m.test_words.begin(), m.test_words.end());
        return m;
    }

    // Pick 4 unseen letters that keep both sides viable.
    std::vector<core::Letter> present;
    for (core::Letter l : core::all_letters()) {
        for (const std::string& w : words) {
            if (w.find(core::to_char(l)) != std::string::npos) {
                present.push_back(l);
                break;
            }
        }
    }
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<core::Letter> candidates = present;
        rng.shuffle(candidates);
        candidates.resize(std::min<std::size_t>(4, candidates.size()));
        SplitManifest m = partition_by_letters(words, candidates);
        if (static_cast<int>(m.train_words.size()) >= cfg.min_train_words &&
            static_cast<int>(m.test_words.size()) >= cfg.min_test_words) {
            std::sort(m.unseen_letters.begin(), m.unseen_letters.end());
            std::sort(m.train_words.begin(), m.train_words.end());
            std::sort(m.test_words.begin(), m.test_words.end());
            return m;
        }
    }
    throw InfeasibleSplit("no 4-letter unseen set keeps both split sides viable");
}

std::vector<std::string> read_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArtifactMissing("cannot open word list " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return words;
}

}  // namespace spp::datagen
