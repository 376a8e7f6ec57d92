#pragma once

#include <array>
#include <cstdint>

#include "spp/core/domain.hpp"

namespace spp::datagen {

/// 8x8 1-bit glyph bitmaps for A-Z; the single source of letter appearance
/// for the renderer, the OCR corpus and the compositional text encoder.
struct Font8x8 {
    /// Row-major 64 floats in {0,1} for one letter.
    static const std::array<float, 64>& glyph(core::Letter l);

    /// Nearest-neighbor sample at continuous glyph coords (u, v) in [0,8)^2;
    /// zero outside.
    static float sample(core::Letter l, float u, float v);
};

}  // namespace spp::datagen
