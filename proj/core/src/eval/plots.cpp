#include "spp/eval/plots.hpp"

#include <algorithm>
#include <cmath>

#include "spp/datagen/render.hpp"

namespace spp::eval {

img::Image plot_curves(const std::vector<CurveSeries>& series, double y_min, double y_max,
                       int width, int height) {
    img::Image im(height, width);
    im.fill(1.0f, 1.0f, 1.0f);
    const float margin_l = 24.0f;
    const float margin_b = 18.0f;
    const float margin_t = 10.0f;
    const float margin_r = 8.0f;
    const float x0 = margin_l;
    const float y0 = static_cast<float>(height) - margin_b;
    const float x1 = static_cast<float>(width) - margin_r;
    const float y1 = margin_t;
    const std::array<float, 3> axis = {0.2f, 0.2f, 0.2f};
    img::draw_line(im, x0, y0, x1, y0, axis);
    img::draw_line(im, x0, y0, x0, y1, axis);

    std::size_t n = 1;
    for (const auto& s : series) n = std::max(n, s.values.size());
    auto map_x = [&](std::size_t i) {
        return n <= 1 ? x0 : x0 + (x1 - x0) * static_cast<float>(i) / static_cast<float>(n - 1);
    };
    auto map_y = [&](double v) {
        const double t = (std::clamp(v, y_min, y_max) - y_min) / std::max(1e-9, y_max - y_min);
        return y0 - static_cast<float>(t) * (y0 - y1);
    };
    // y gridlines at quarters
    for (int g = 1; g <= 3; ++g) {
        const float gy = y0 - (y0 - y1) * static_cast<float>(g) / 4.0f;
        img::draw_line(im, x0, gy, x1, gy, {0.88f, 0.88f, 0.88f});
    }
    for (std::size_t i = 0; i < n; ++i) {
        img::draw_line(im, map_x(i), y0, map_x(i), y0 + 3.0f, axis);
    }

    float legend_y = y1 + 2.0f;
    for (const auto& s : series) {
        for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
            img::draw_line(im, map_x(i), map_y(s.values[i]), map_x(i + 1),
                           map_y(s.values[i + 1]), s.color);
        }
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            img::fill_rect(im, map_x(i) - 1.5f, map_y(s.values[i]) - 1.5f, map_x(i) + 1.5f,
                           map_y(s.values[i]) + 1.5f, s.color);
        }
        img::draw_line(im, x1 - 60.0f, legend_y + 4.0f, x1 - 48.0f, legend_y + 4.0f, s.color);
        datagen::draw_label(im, s.label, static_cast<int>(x1) - 44, static_cast<int>(legend_y),
                            1.0f, {0.1f, 0.1f, 0.1f});
        legend_y += 11.0f;
    }
    return im;
}

img::Image film_strip(const std::vector<std::pair<std::string, std::vector<img::Image>>>& rows) {
    if (rows.empty()) return img::Image(2, 2);
    const int fh = rows[0].second[0].h;
    const int fw = rows[0].second[0].w;
    const int pad = 2;
    const int label_h = 12;
    std::size_t cols = 0;
    for (const auto& [label, frames] : rows) cols = std::max(cols, frames.size());

    const int row_h = label_h + fh + pad;
    img::Image out(static_cast<int>(rows.size()) * row_h + pad,
                   static_cast<int>(cols) * (fw + pad) + pad);
    out.fill(0.95f, 0.95f, 0.95f);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int oy = pad + static_cast<int>(r) * row_h;
        datagen::draw_label(out, rows[r].first, pad + 2, oy, 1.0f, {0.15f, 0.15f, 0.15f});
        for (std::size_t c = 0; c < rows[r].second.size(); ++c) {
            const img::Image& f = rows[r].second[c];
            const int ox = pad + static_cast<int>(c) * (fw + pad);
            for (int y = 0; y < f.h; ++y) {
                std::copy_n(f.px(y, 0), static_cast<std::size_t>(f.w) * 3,
                            out.px(oy + label_h + y, ox));
            }
        }
    }
    return out;
}

}  // namespace spp::eval
