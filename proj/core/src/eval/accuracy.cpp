#include "spp/eval/accuracy.hpp"

#include "spp/core/grammar.hpp"
#include "spp/core/transition.hpp"

namespace spp::eval {

namespace {

/// Expected board contents after each plan step, replayed on an idealized
/// state that grants every referenced tile (same convention as the plan
/// validator). Unparseable or illegal steps leave the board unchanged.
std::vector<std::array<std::optional<core::ObjectRef>, core::kNumQuarters>> expected_boards(
    const std::vector<std::string>& plan_text) {
    std::vector<std::array<std::optional<core::ObjectRef>, core::kNumQuarters>> out;
    core::SymbolicState state;
    for (const std::string& text : plan_text) {
        try {
            const core::Instruction instr = core::parse_instruction(text);
            bool on_board = false;
            for (const auto& c : state.cells) {
                if (c && *c == instr.object) on_board = true;
            }
            if (!on_board) {
                state.staging = {
                    core::Tile{instr.object.letter, instr.object.color, 0.0f, 0.0f, 0.0f}};
                state = core::apply_instruction(state, instr);
            }
        } catch (const ParseError&) {
        } catch (const ApplyError&) {
        }
        state.staging.clear();
        out.push_back(state.cells);
    }
    return out;
}

}  // namespace

KeyframeCounts keyframe_counts(const std::vector<img::Image>& frames,
                               const std::vector<std::string>& plan_text,
                               const core::BoardPose& pose, const OcrModel& ocr,
                               const std::optional<std::set<char>>& letter_filter) {
    if (frames.size() != plan_text.size()) {
        throw ShapeMismatch("keyframe_counts: one frame per plan step required");
    }
    const auto boards = expected_boards(plan_text);
    KeyframeCounts counts;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto readings = read_board(frames[t], pose, ocr);
        int color_ok = 0, letter_ok = 0, both_ok = 0, expected = 0;
        for (int cell = 0; cell < core::kNumQuarters; ++cell) {
            const auto& want = boards[t][static_cast<std::size_t>(cell)];
            if (!want) continue;
            const char want_letter = core::to_char(want->letter);
            if (letter_filter && !letter_filter->count(want_letter)) continue;
            ++expected;
            const CellReading& got = readings[static_cast<std::size_t>(cell)];
            const bool color_match = got.color_class == static_cast<int>(want->color);
            const bool letter_match = got.letter_class == static_cast<int>(want->letter);
            if (color_match) ++color_ok;
            if (letter_match) ++letter_ok;
            if (color_match && letter_match) ++both_ok;
        }
        counts.color_ok.push_back(color_ok);
        counts.letter_ok.push_back(letter_ok);
        counts.both_ok.push_back(both_ok);
        counts.expected.push_back(expected);
    }
    return counts;
}

KeyframeAccuracy aggregate_keyframes(const std::vector<KeyframeCounts>& per_video) {
    KeyframeAccuracy acc;
    if (per_video.empty()) return acc;
    const std::size_t steps = per_video[0].expected.size();
    for (std::size_t t = 0; t < steps; ++t) {
        long color = 0, letter = 0, both = 0, n = 0;
        for (const KeyframeCounts& kc : per_video) {
            color += kc.color_ok[t];
            letter += kc.letter_ok[t];
            both += kc.both_ok[t];
            n += kc.expected[t];
        }
        acc.color_pct.push_back(n ? 100.0 * color / n : 0.0);
        acc.letter_pct.push_back(n ? 100.0 * letter / n : 0.0);
        acc.letter_and_color_pct.push_back(n ? 100.0 * both / n : 0.0);
        acc.n_expected.push_back(static_cast<int>(n));
    }
    return acc;
}

std::pair<int, int> final_frame_letter_counts(const img::Image& final_frame,
                                              const std::string& word,
                                              const core::BoardPose& pose, const OcrModel& ocr,
                                              const std::optional<std::set<char>>& letter_filter) {
    const auto readings = read_board(final_frame, pose, ocr);
    int ok = 0, total = 0;
    for (int cell = 0; cell < core::kNumQuarters && cell < static_cast<int>(word.size());
         ++cell) {
        const char want = word[static_cast<std::size_t>(cell)];
        if (letter_filter && !letter_filter->count(want)) continue;
        ++total;
        const auto l = core::letter_from_char(want);
        if (l && readings[static_cast<std::size_t>(cell)].letter_class ==
                     static_cast<int>(*l)) {
            ++ok;
        }
    }
    return {ok, total};
}

double final_frame_accuracy(const img::Image& final_frame, const std::string& word,
                            const core::BoardPose& pose, const OcrModel& ocr) {
    const auto [ok, total] = final_frame_letter_counts(final_frame, word, pose, ocr);
    return total ? static_cast<double>(ok) / total : 0.0;
}

}  // namespace spp::eval
