#include "spp/image/image.hpp"

#include <algorithm>
#include <cmath>

namespace spp::img {

void Image::fill(float r, float g, float b) {
    for (std::size_t i = 0; i + 2 < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

void Image::clamp01() {
    for (float& v : data) v = std::clamp(v, 0.0f, 1.0f);
}

void blend_px(float* dst, const std::array<float, 3>& color, float alpha) {
    for (int c = 0; c < 3; ++c) dst[c] += alpha * (color[c] - dst[c]);
}

void fill_rect(Image& im, float x0, float y0, float x1, float y1,
               const std::array<float, 3>& color, float alpha) {
    const int ix0 = std::max(0, static_cast<int>(std::floor(x0)));
    const int iy0 = std::max(0, static_cast<int>(std::floor(y0)));
    const int ix1 = std::min(im.w, static_cast<int>(std::ceil(x1)));
    const int iy1 = std::min(im.h, static_cast<int>(std::ceil(y1)));
    for (int y = iy0; y < iy1; ++y) {
        for (int x = ix0; x < ix1; ++x) {
            // coverage of the pixel square by the rect, separable
            const float cx = std::min<float>(x + 1.0f, x1) - std::max<float>(x, x0);
            const float cy = std::min<float>(y + 1.0f, y1) - std::max<float>(y, y0);
            const float cov = std::clamp(cx, 0.0f, 1.0f) * std::clamp(cy, 0.0f, 1.0f);
            if (cov > 0.0f) blend_px(im.px(y, x), color, alpha * cov);
        }
    }
}

Image resize_bilinear(const Image& im, int oh, int ow) {
    Image out(oh, ow);
    if (im.h == 0 || im.w == 0) return out;
    const float sy = static_cast<float>(im.h) / oh;
    const float sx = static_cast<float>(im.w) / ow;
    for (int y = 0; y < oh; ++y) {
        const float fy = (y + 0.5f) * sy - 0.5f;
        const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, im.h - 1);
        const int y1 = std::min(y0 + 1, im.h - 1);
        const float wy = std::clamp(fy - y0, 0.0f, 1.0f);
        for (int x = 0; x < ow; ++x) {
            const float fx = (x + 0.5f) * sx - 0.5f;
            const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, im.w - 1);
            const int x1 = std::min(x0 + 1, im.w - 1);
            const float wx = std::clamp(fx - x0, 0.0f, 1.0f);
            const float* p00 = im.px(y0, x0);
            const float* p01 = im.px(y0, x1);
            const float* p10 = im.px(y1, x0);
            const float* p11 = im.px(y1, x1);
            float* o = out.px(y, x);
            for (int c = 0; c < 3; ++c) {
                const float top = p00[c] + wx * (p01[c] - p00[c]);
                const float bot = p10[c] + wx * (p11[c] - p10[c]);
                o[c] = top + wy * (bot - top);
            }
        }
    }
    return out;
}

Image crop(const Image& im, int y0, int x0, int ch, int cw, const std::array<float, 3>& fill) {
    Image out(ch, cw);
    for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
            const int sy = y0 + y;
            const int sx = x0 + x;
            float* o = out.px(y, x);
            if (sy >= 0 && sy < im.h && sx >= 0 && sx < im.w) {
                const float* p = im.px(sy, sx);
                o[0] = p[0];
                o[1] = p[1];
                o[2] = p[2];
            } else {
                o[0] = fill[0];
                o[1] = fill[1];
                o[2] = fill[2];
            }
        }
    }
    return out;
}

Image montage(const std::vector<Image>& tiles, int cols, int pad,
              const std::array<float, 3>& bg) {
    if (tiles.empty()) return Image(pad, pad);
    const int th = tiles[0].h;
    const int tw = tiles[0].w;
    const int n = static_cast<int>(tiles.size());
    const int rows = (n + cols - 1) / cols;
    Image out(rows * (th + pad) + pad, cols * (tw + pad) + pad);
    out.fill(bg[0], bg[1], bg[2]);
    for (int i = 0; i < n; ++i) {
        if (tiles[i].h != th || tiles[i].w != tw) {
            throw ShapeMismatch("montage tiles must share one shape");
        }
        const int r = i / cols;
        const int c = i % cols;
        const int oy = pad + r * (th + pad);
        const int ox = pad + c * (tw + pad);
        for (int y = 0; y < th; ++y) {
            std::copy_n(tiles[i].px(y, 0), static_cast<std::size_t>(tw) * 3, out.px(oy + y, ox));
        }
    }
    return out;
}

void draw_line(Image& im, float x0, float y0, float x1, float y1,
               const std::array<float, 3>& color) {
    const float dx = x1 - x0;
    const float dy = y1 - y0;
    const float len = std::sqrt(dx * dx + dy * dy);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0f)));
    for (int i = 0; i <= steps; ++i) {
        const float t = static_cast<float>(i) / steps;
        const float px = x0 + t * dx;
        const float py = y0 + t * dy;
        const int bx = static_cast<int>(std::floor(px - 0.5f));
        const int by = static_cast<int>(std::floor(py - 0.5f));
        for (int oy = 0; oy <= 1; ++oy) {
            for (int ox = 0; ox <= 1; ++ox) {
                const int x = bx + ox;
                const int y = by + oy;
                if (x < 0 || y < 0 || x >= im.w || y >= im.h) continue;
                const float wx = 1.0f - std::abs(px - (x + 0.5f));
                const float wy = 1.0f - std::abs(py - (y + 0.5f));
                const float a = std::clamp(wx, 0.0f, 1.0f) * std::clamp(wy, 0.0f, 1.0f);
                blend_px(im.px(y, x), color, a);
            }
        }
    }
}

std::vector<std::uint8_t> quantize8(const Image& im) {
    std::vector<std::uint8_t> bytes(im.data.size());
    for (std::size_t i = 0; i < im.data.size(); ++i) {
        const float v = std::clamp(im.data[i], 0.0f, 1.0f);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    return bytes;
}

Image dequantize8(const std::vector<std::uint8_t>& bytes, int h, int w) {
    if (bytes.size() != static_cast<std::size_t>(h) * w * 3) {
        throw ShapeMismatch("byte buffer does not match image shape");
    }
    Image out(h, w);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out.data[i] = static_cast<float>(bytes[i]) / 255.0f;
    }
    return out;
}

}  // namespace spp::img
