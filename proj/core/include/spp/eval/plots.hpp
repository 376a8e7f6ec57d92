#pragma once

#include <string>
#include <vector>

#include "spp/image/image.hpp"

namespace spp::eval {

struct CurveSeries {
    std::string label;  // uppercase letters render; other chars advance blank
    std::vector<double> values;
    std::array<float, 3> color;
};

/// Minimal line chart: axes, per-index points joined by segments, a legend
/// of glyph labels. y is clamped to [y_min, y_max].
img::Image plot_curves(const std::vector<CurveSeries>& series, double y_min, double y_max,
                       int width = 320, int height = 220);

/// Rows of equally sized frames stacked into one strip, one labeled row per
/// source (ground truth first, then each architecture).
img::Image film_strip(const std::vector<std::pair<std::string, std::vector<img::Image>>>& rows);

}  // namespace spp::eval
