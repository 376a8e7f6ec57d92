#pragma once

#include <string>
#include <vector>

#include "spp/datagen/dataset_io.hpp"
#include "spp/eval/accuracy.hpp"
#include "spp/model/predictor.hpp"
#include "spp/planner/validate.hpp"

namespace spp::eval {

constexpr int kReportSchemaVersion = 1;

struct ArchitectureRun {
    std::string name;
    const model::VideoPredictor* predictor = nullptr;
    const model::Conditioner* conditioner = nullptr;
};

struct AblationOptions {
    std::string label_source = "oracle";  // oracle | planner | ground_truth
    std::uint64_t seed = 99;
    std::string out_dir;  // report.json + plots; empty writes nothing
    bool unseen_only = false;  // restrict letter accuracy to the split's unseen letters
    int filmstrip_videos = 1;
    int workers = 1;
};

struct ArchitectureResult {
    std::string name;
    double mse = 0.0;
    double psnr = 0.0;  // from the aggregate mse
    double ssim = 0.0;
    double final_letter_pct = 0.0;
    double final_color_pct = -1.0;         // -1 encodes n/a (no color prescription)
    double final_letter_color_pct = -1.0;  // -1 encodes n/a
    KeyframeAccuracy keyframes;
    int n_videos = 0;
    int failures = 0;
};

struct AblationReport {
    std::vector<ArchitectureResult> results;
    std::string json;
};

/// Plans, rolls out and scores every test video for every architecture;
/// aggregates pixel metrics, final-frame and per-keyframe OCR accuracies;
/// emits report.json, accuracy curves and qualitative film strips. One
/// video's failure is recorded, not fatal. Fully seeded and deterministic.
AblationReport run_ablation_suite(const datagen::Dataset& dataset,
                                  const std::vector<ArchitectureRun>& architectures,
                                  const planner::PlannerModel* planner_model,
                                  const OcrModel& ocr, const AblationOptions& opts);

}  // namespace spp::eval
