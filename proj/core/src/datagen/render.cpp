#include "spp/datagen/render.hpp"

#include <algorithm>
#include <cmath>

#include "spp/core/grammar.hpp"
#include "spp/datagen/font.hpp"

namespace spp::datagen {

using core::BoardPose;
using core::SymbolicState;

void draw_glyph(img::Image& im, core::Letter letter, const std::array<float, 3>& color, float cx,
                float cy, float size, float angle, int supersample) {
    const float half = size * 0.5f;
    const float r = half * 1.5f;  // rotation-safe bounding radius
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int x1 = std::min(im.w - 1, static_cast<int>(std::ceil(cx + r)));
    const int y1 = std::min(im.h - 1, static_cast<int>(std::ceil(cy + r)));
    const float ca = std::cos(angle);
    const float sa = std::sin(angle);
    const int ss = std::max(1, supersample);
    const float inv_ss = 1.0f / static_cast<float>(ss);
    const float scale = 8.0f / size;  // pixels -> glyph grid
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            float cov = 0.0f;
            for (int sy = 0; sy < ss; ++sy) {
                for (int sx = 0; sx < ss; ++sx) {
                    const float px = static_cast<float>(x) + (sx + 0.5f) * inv_ss - cx;
                    const float py = static_cast<float>(y) + (sy + 0.5f) * inv_ss - cy;
                    // rotate back into glyph space
                    const float gx = ca * px + sa * py;
                    const float gy = -sa * px + ca * py;
                    cov += Font8x8::sample(letter, (gx + half) * scale, (gy + half) * scale);
                }
            }
            cov *= inv_ss * inv_ss;
            if (cov > 0.0f) img::blend_px(im.px(y, x), color, cov);
        }
    }
}

img::Image render_frame(const SymbolicState& state, const RenderConfig& cfg) {
    const float s = static_cast<float>(cfg.resolution) / 64.0f;
    img::Image im(cfg.resolution, cfg.resolution);
    im.fill(cfg.background[0], cfg.background[1], cfg.background[2]);

    const BoardPose& pose = state.board_pose;
    const float cell = pose.cell_size * s;
    const float bx = pose.cx * s;
    const float by = pose.cy * s;
    const float b = cfg.board_border * s;
    const float half_h = cell * 0.5f;
    const float left = bx - 2.0f * cell - b;
    const float right = bx + 2.0f * cell + b;
    // frame, then cell interiors (leaves the 4 boundaries visible)
    img::fill_rect(im, left, by - half_h - b, right, by + half_h + b, cfg.board_line);
    for (int i = 0; i < core::kNumQuarters; ++i) {
        const float cx = pose.cell_cx(i) * s;
        img::fill_rect(im, cx - half_h + b * 0.5f, by - half_h + b * 0.5f,
                       cx + half_h - b * 0.5f, by + half_h - b * 0.5f, cfg.board_fill);
    }

    for (int i = 0; i < core::kNumQuarters; ++i) {
        if (!state.cells[i]) continue;
        draw_glyph(im, state.cells[i]->letter, core::rgb(state.cells[i]->color),
                   pose.cell_cx(i) * s, pose.cell_cy(i) * s, cfg.board_glyph * s, 0.0f,
                   cfg.supersample);
    }
    for (const core::Tile& t : state.staging) {
        draw_glyph(im, t.letter, core::rgb(t.color), t.x * s, t.y * s, cfg.staging_glyph * s,
                   t.angle, cfg.supersample);
    }
    im.clamp01();
    return im;
}

void draw_label(img::Image& im, const std::string& text, int x, int y, float scale,
                const std::array<float, 3>& color) {
    float cx = static_cast<float>(x);
    const float step = 8.0f * scale;
    for (char ch : text) {
        if (auto l = core::letter_from_char(ch)) {
            draw_glyph(im, *l, color, cx + step * 0.5f, static_cast<float>(y) + step * 0.5f,
                       7.0f * scale, 0.0f, 2);
        }
        cx += step;  // unknown chars (spaces, digits) advance silently
    }
}

}  // namespace spp::datagen
