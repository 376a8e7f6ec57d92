#include "spp/datagen/font.hpp"

#include <cmath>
#include <vector>

namespace spp::datagen {

namespace {

// Glyphs drawn on a 7x7 grid inside the 8x8 box (last row/col blank).
const char* const kGlyphs[26][8] = {
    {
        "..###...",
        ".#...#..",
        "#.....#.",
        "#.....#.",
        "#######.",
        "#.....#.",
        "#.....#.",
        "........",
    },
    {
        "######..",
        "#.....#.",
        "#.....#.",
        "######..",
        "#.....#.",
        "#.....#.",
        "######..",
        "........",
    },
    {
        ".#####..",
        "#.....#.",
        "#.......",
        "#.......",
        "#.......",
        "#.....#.",
        ".#####..",
        "........",
    },
    {
        "######..",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "######..",
        "........",
    },
    {
        "#######.",
        "#.......",
        "#.......",
        "#####...",
        "#.......",
        "#.......",
        "#######.",
        "........",
    },
    {
        "#######.",
        "#.......",
        "#.......",
        "#####...",
        "#.......",
        "#.......",
        "#.......",
        "........",
    },
    {
        ".#####..",
        "#.....#.",
        "#.......",
        "#..####.",
        "#.....#.",
        "#.....#.",
        ".#####..",
        "........",
    },
    {
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#######.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "........",
    },
    {
        ".#####..",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        ".#####..",
        "........",
    },
    {
        "..#####.",
        ".....#..",
        ".....#..",
        ".....#..",
        ".....#..",
        "#....#..",
        ".####...",
        "........",
    },
    {
        "#....#..",
        "#...#...",
        "#..#....",
        "###.....",
        "#..#....",
        "#...#...",
        "#....#..",
        "........",
    },
    {
        "#.......",
        "#.......",
        "#.......",
        "#.......",
        "#.......",
        "#.......",
        "#######.",
        "........",
    },
    {
        "#.....#.",
        "##...##.",
        "#.#.#.#.",
        "#..#..#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "........",
    },
    {
        "#.....#.",
        "##....#.",
        "#.#...#.",
        "#..#..#.",
        "#...#.#.",
        "#....##.",
        "#.....#.",
        "........",
    },
    {
        ".#####..",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        ".#####..",
        "........",
    },
    {
        "######..",
        "#.....#.",
        "#.....#.",
        "######..",
        "#.......",
        "#.......",
        "#.......",
        "........",
    },
    {
        ".#####..",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#...#.#.",
        "#....#..",
        ".####.#.",
        "........",
    },
    {
        "######..",
        "#.....#.",
        "#.....#.",
        "######..",
        "#..#....",
        "#...#...",
        "#....##.",
        "........",
    },
    {
        ".######.",
        "#.......",
        "#.......",
        ".#####..",
        "......#.",
        "......#.",
        "######..",
        "........",
    },
    {
        "#######.",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "........",
    },
    {
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#.....#.",
        ".#####..",
        "........",
    },
    {
        "#.....#.",
        "#.....#.",
        "#.....#.",
        ".#...#..",
        ".#...#..",
        "..#.#...",
        "...#....",
        "........",
    },
    {
        "#.....#.",
        "#.....#.",
        "#.....#.",
        "#..#..#.",
        "#.#.#.#.",
        "##...##.",
        "#.....#.",
        "........",
    },
    {
        "#.....#.",
        ".#...#..",
        "..#.#...",
        "...#....",
        "..#.#...",
        ".#...#..",
        "#.....#.",
        "........",
    },
    {
        "#.....#.",
        ".#...#..",
        "..#.#...",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "........",
    },
    {
        "#######.",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        ".#......",
        "#######.",
        "........",
    },
};

std::vector<std::array<float, 64>> build_bitmaps() {
    std::vector<std::array<float, 64>> maps(26);
    for (int l = 0; l < 26; ++l) {
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                maps[l][r * 8 + c] = kGlyphs[l][r][c] == '#' ? 1.0f : 0.0f;
            }
        }
    }
    return maps;
}

}  // namespace

const std::array<float, 64>& Font8x8::glyph(core::Letter l) {
    static const std::vector<std::array<float, 64>> maps = build_bitmaps();
    return maps[static_cast<std::size_t>(l)];
}

float Font8x8::sample(core::Letter l, float u, float v) {
    if (u < 0.0f || v < 0.0f || u >= 8.0f || v >= 8.0f) return 0.0f;
    const int c = static_cast<int>(u);
    const int r = static_cast<int>(v);
    return glyph(l)[r * 8 + c];
}

}  // namespace spp::datagen
