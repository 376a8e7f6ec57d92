#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spp/common/errors.hpp"

namespace spp::img {

/// HxWx3 float image, channel values in [0,1], row-major HWC layout.
struct Image {
    int h = 0;
    int w = 0;
    std::vector<float> data;  // h*w*3

    Image() = default;
    Image(int h_, int w_) : h(h_), w(w_), data(static_cast<std::size_t>(h_) * w_ * 3, 0.0f) {}

    float* px(int y, int x) { return data.data() + (static_cast<std::size_t>(y) * w + x) * 3; }
    const float* px(int y, int x) const {
        return data.data() + (static_cast<std::size_t>(y) * w + x) * 3;
    }

    void fill(float r, float g, float b);
    void clamp01();

    bool operator==(const Image&) const = default;
};

/// mix dst towards color by alpha in [0,1].
void blend_px(float* dst, const std::array<float, 3>& color, float alpha);

/// Axis-aligned filled rectangle; coordinates clipped to the image.
void fill_rect(Image& im, float x0, float y0, float x1, float y1,
               const std::array<float, 3>& color, float alpha = 1.0f);

/// Bilinear resize to (oh, ow).
Image resize_bilinear(const Image& im, int oh, int ow);

/// Crop [y0, y0+ch) x [x0, x0+cw); out-of-bounds samples take the fill color.
Image crop(const Image& im, int y0, int x0, int ch, int cw,
           const std::array<float, 3>& fill = {0.0f, 0.0f, 0.0f});

/// Lays tiles out in a grid (rows x cols) with a separator border.
Image montage(const std::vector<Image>& tiles, int cols, int pad = 2,
              const std::array<float, 3>& bg = {1.0f, 1.0f, 1.0f});

/// Anti-aliased line segment.
void draw_line(Image& im, float x0, float y0, float x1, float y1,
               const std::array<float, 3>& color);

/// 8-bit quantization used by the on-disk format: round(v*255) clamped.
std::vector<std::uint8_t> quantize8(const Image& im);
Image dequantize8(const std::vector<std::uint8_t>& bytes, int h, int w);

}  // namespace spp::img
