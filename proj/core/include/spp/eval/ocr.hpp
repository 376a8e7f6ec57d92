#pragma once

#include <array>
#include <string>
#include <vector>

#include "spp/core/domain.hpp"
#include "spp/datagen/render.hpp"
#include "spp/nn/layers.hpp"

namespace spp::eval {

constexpr int kOcrFormatVersion = 1;
constexpr int kLetterClasses = core::kNumLetters + 1;  // + empty
constexpr int kColorClasses = core::kNumColors + 1;    // + none
constexpr int kEmptyLetter = core::kNumLetters;
constexpr int kNoneColor = core::kNumColors;

struct OcrConfig {
    int crop = 16;  // classifier input side
    int n_train = 6000;
    int n_heldout = 1000;
    int epochs = 12;
    int batch = 64;
    float lr = 1.5e-3f;
    std::uint64_t seed = 7;
    datagen::RenderConfig render;  // shares the dataset's cell geometry

    bool operator==(const OcrConfig&) const = default;
};

/// One board cell as the classifiers see it.
struct CellReading {
    int letter_class = kEmptyLetter;  // 0..25 letters, 26 empty
    float letter_conf = 0.0f;
    int color_class = kNoneColor;  // 0..5 colors, 6 none
    float color_conf = 0.0f;
};

/// Two small CNNs over fixed-size cell crops: a 27-way letter head and a
/// 7-way color head.
class OcrModel {
public:
    explicit OcrModel(const OcrConfig& cfg);

    const OcrConfig& config() const { return cfg_; }
    nn::Params& params() { return params_; }

    CellReading classify(const img::Image& crop) const;
    std::vector<CellReading> classify_batch(const std::vector<img::Image>& crops) const;

    void save(const std::string& path) const;
    static OcrModel load(const std::string& path);

    struct Head {
        struct Conv {
            int w, b;
        } c1, c2;
        nn::LinearSpec fc1, fc2;
    };
    const Head& letter_head() const { return letter_; }
    const Head& color_head() const { return color_; }
    nn::Var head_logits(const nn::Bound& bp, const Head& head, const nn::Var& x) const;

private:
    OcrConfig cfg_;
    nn::Params params_;
    Head letter_, color_;
};

/// A rendered cell crop and its ground-truth classes. `clean` crops carry no
/// augmentation; training crops get jitter/blur/noise.
struct CellSample {
    img::Image crop;
    int letter_class;
    int color_class;
};

CellSample make_cell_sample(int letter_class, int color_class, Rng& rng, const OcrConfig& cfg,
                            bool clean);

struct OcrTrainStats {
    double letter_accuracy = 0.0;  // held-out, clean crops
    double color_accuracy = 0.0;
    std::string letter_confusion;  // row-major counts, for GateFailure reports
    std::string color_confusion;
};

/// Trains on a synthetic jitter/blur-augmented corpus and gates on >= 99%
/// held-out clean accuracy per head (GateFailure with the confusion matrix
/// otherwise).
std::pair<OcrModel, OcrTrainStats> train_ocr(const OcrConfig& cfg, int workers);

/// Crops the 4 cells at the given board pose, resizes to the classifier
/// input and classifies. Throws PoseOutOfFrame when a cell leaves the frame.
std::vector<CellReading> read_board(const img::Image& frame, const core::BoardPose& pose,
                                    const OcrModel& ocr);

}  // namespace spp::eval
