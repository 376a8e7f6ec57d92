#pragma once

#include <string>
#include <vector>

#include "spp/datagen/dataset_io.hpp"
#include "spp/model/predictor.hpp"

namespace spp::model {

/// One training video: its keyframes plus per-step conditioning vectors.
struct VideoItem {
    std::vector<img::Image> frames;            // horizon+1
    std::vector<std::vector<float>> cond;      // horizon entries (empty vecs in mode none)
    std::string word;
    std::string high_level;
    std::vector<std::string> low_level;
};

std::vector<VideoItem> build_items(const datagen::Dataset& dataset, const std::string& split,
                                   const Conditioner& conditioner, int horizon);

struct TrainOptions {
    std::string checkpoint_path;  // final checkpoint ("" = keep in memory only)
    std::string trace_path;       // line-delimited JSON loss trace
    std::string snapshot_dir;     // eval-mode rollout strips per checkpoint
    int checkpoint_every = 0;     // epochs between periodic checkpoints (0 = end only)
    int workers = 1;
};

struct TrainResult {
    std::vector<LossBreakdown> epoch_losses;
};

/// Teacher-forced optimization of reconstruction + beta * KL over keyframe
/// sequences. Throws NonFiniteLoss (after a diagnostic dump) if the loss
/// leaves the reals, ConfigError for degenerate settings.
TrainResult train_predictor(VideoPredictor& model, const std::vector<VideoItem>& items,
                            const TrainOptions& opts);

/// Encoder/decoder-only overfit: reconstructs single frames through the
/// feature bottleneck with skips zeroed. Returns the final per-pixel MSE.
double autoencoder_overfit(VideoPredictor& model, const std::vector<img::Image>& frames,
                           int steps, float lr, int workers);

}  // namespace spp::model
