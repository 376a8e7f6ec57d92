#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spp/eval/ocr.hpp"

namespace spp::eval {

/// Per-keyframe match counts for one generated video against the symbolic
/// replay of the plan that conditioned it.
struct KeyframeCounts {
    std::vector<int> color_ok;   // per step
    std::vector<int> letter_ok;
    std::vector<int> both_ok;
    std::vector<int> expected;   // cells expected occupied after the step
};

/// Aggregated percentages per keyframe index.
struct KeyframeAccuracy {
    std::vector<double> color_pct;
    std::vector<double> letter_pct;
    std::vector<double> letter_and_color_pct;
    std::vector<int> n_expected;
};

/// OCR-reads each generated frame's board and compares against the expected
/// contents after replaying plan_text[0..t] on an idealized state. Cells
/// whose expected letter is outside `letter_filter` (when set) are skipped,
/// which is how unseen-letter accuracy is isolated.
KeyframeCounts keyframe_counts(const std::vector<img::Image>& frames,
                               const std::vector<std::string>& plan_text,
                               const core::BoardPose& pose, const OcrModel& ocr,
                               const std::optional<std::set<char>>& letter_filter = std::nullopt);

KeyframeAccuracy aggregate_keyframes(const std::vector<KeyframeCounts>& per_video);

/// Fraction of the word's 4 letters OCR-read in their correct cells; colors
/// ignored. With `letter_filter`, only positions whose expected letter is in
/// the set count (returns {ok, total}).
std::pair<int, int> final_frame_letter_counts(
    const img::Image& final_frame, const std::string& word, const core::BoardPose& pose,
    const OcrModel& ocr, const std::optional<std::set<char>>& letter_filter = std::nullopt);

double final_frame_accuracy(const img::Image& final_frame, const std::string& word,
                            const core::BoardPose& pose, const OcrModel& ocr);

}  // namespace spp::eval
