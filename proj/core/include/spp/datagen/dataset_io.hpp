#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spp/datagen/demo.hpp"
#include "spp/datagen/splits.hpp"

namespace spp::datagen {

constexpr int kDatasetFormatVersion = 1;

struct VideoRecord {
    std::string id;
    std::string word;
    std::uint64_t seed = 0;
    std::string split;  // "train" | "test"
    std::vector<std::pair<std::string, std::uint32_t>> checksums;  // file -> crc32
};

struct DatasetManifest {
    int format_version = kDatasetFormatVersion;
    std::string config_echo;  // serialized JSON of the producing config
    SplitManifest split;
    std::vector<VideoRecord> videos;
};

/// On-disk dataset handle. Frames and labels load lazily per video.
struct Dataset {
    std::string root;
    DatasetManifest manifest;

    std::size_t size() const { return manifest.videos.size(); }
    Demonstration load(std::size_t index) const;
    std::vector<std::size_t> indices_for_split(const std::string& split) const;
};

/// Layout: root/manifest.json, root/videos/{id}/frame_{0..4}.png,
/// labels.json, scene.json. Ids are zero-padded manifest positions, so the
/// layout is independent of generation order.
Dataset write_dataset(const std::string& root,
                      const std::vector<std::pair<Demonstration, std::string>>& demos,
                      const SplitManifest& split, const std::string& config_echo);

/// Opens a dataset, verifies every per-file checksum, and replays the labels
/// of ceil(replay_fraction * n) evenly spaced videos through the symbolic
/// executor, re-rendering and comparing against the stored frames bit-exactly.
/// Throws CorruptDataset naming the offending video.
Dataset read_dataset(const std::string& root, double replay_fraction = 0.0);

/// Generates all (word x videos_per_word) demonstrations for a split and
/// writes the dataset; embarrassingly parallel across videos.
Dataset generate_dataset(const std::string& root, const SplitManifest& split,
                         const DatagenConfig& cfg, std::uint64_t seed,
                         const std::string& config_echo, int workers);

}  // namespace spp::datagen
