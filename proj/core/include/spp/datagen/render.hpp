#pragma once

#include "spp/core/domain.hpp"
#include "spp/image/image.hpp"

namespace spp::datagen {

/// Geometry and palette of the deterministic 2D rasterizer. All lengths are
/// scene units on the 64x64 reference grid and scale with `resolution`.
struct RenderConfig {
    int resolution = 64;
    int supersample = 3;     // per-axis glyph subsamples
    float board_glyph = 10.0f;
    float staging_glyph = 9.0f;
    float board_border = 1.0f;
    std::array<float, 3> background = {0.10f, 0.10f, 0.12f};
    std::array<float, 3> board_fill = {0.80f, 0.80f, 0.78f};
    std::array<float, 3> board_line = {0.38f, 0.38f, 0.40f};

    bool operator==(const RenderConfig&) const = default;
};

/// Deterministic rasterization of a symbolic state: background, board with
/// its 4 cell boundaries, placed tiles upright in their cells, staging tiles
/// at their sampled pose. Values in [0,1], anti-aliased.
img::Image render_frame(const core::SymbolicState& state, const RenderConfig& cfg);

/// Draws a single glyph (used by the renderer and the OCR crop corpus).
void draw_glyph(img::Image& im, core::Letter letter, const std::array<float, 3>& color, float cx,
                float cy, float size, float angle, int supersample);

/// Renders text as a row of small glyphs; for plot labels and film strips.
void draw_label(img::Image& im, const std::string& text, int x, int y, float scale,
                const std::array<float, 3>& color);

}  // namespace spp::datagen
