#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spp::core {

// ---------------------------------------------------------------------------
// Letters

/// One of the 26 uppercase letters, ordered alphabetically.
enum class Letter : std::uint8_t {
    A, B, C, D, E, F, G, H, I, J, K, L, M,
    N, O, P, Q, R, S, T, U, V, W, X, Y, Z
};

constexpr int kNumLetters = 26;

constexpr char to_char(Letter l) { return static_cast<char>('A' + static_cast<int>(l)); }

/// Accepts upper or lower case; nullopt for anything else.
std::optional<Letter> letter_from_char(char c);

std::array<Letter, kNumLetters> all_letters();

// ---------------------------------------------------------------------------
// Colors

/// The 6 tile colors. RGB triples are pairwise separated by >= 0.3 in at
/// least one channel so color classification stays well-posed.
enum class Color : std::uint8_t { Red, Green, Blue, Yellow, Purple, Orange };

constexpr int kNumColors = 6;

std::array<Color, kNumColors> all_colors();
const char* to_string(Color c);
std::optional<Color> color_from_string(const std::string& name);  // case-insensitive
std::array<float, 3> rgb(Color c);

// ---------------------------------------------------------------------------
// Board cells

/// One of the four left-to-right cells of the spelling board.
/// 0=leftmost, 1=second, 2=third, 3=rightmost.
struct QuarterId {
    int index = 0;

    bool operator==(const QuarterId&) const = default;
};

constexpr int kNumQuarters = 4;

const char* quarter_name(QuarterId q);
std::optional<QuarterId> quarter_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Scene objects

/// A colored letter with a pose in scene units (the 64x64 frame grid,
/// regardless of render resolution).
struct Tile {
    Letter letter{};
    Color color{};
    float x = 0.0f;
    float y = 0.0f;
    float angle = 0.0f;  // radians, counterclockwise

    bool operator==(const Tile&) const = default;
};

/// The (color, letter) identity of an object; what instructions refer to.
struct ObjectRef {
    Color color{};
    Letter letter{};

    bool operator==(const ObjectRef&) const = default;
};

// ---------------------------------------------------------------------------
// Instructions

enum class Side : std::uint8_t { Left, Right };

const char* to_string(Side s);

struct QuarterTarget {
    QuarterId quarter;

    bool operator==(const QuarterTarget&) const = default;
};

struct RelativeTarget {
    Side side{};
    ObjectRef reference;

    bool operator==(const RelativeTarget&) const = default;
};

/// One pick-and-place command. The verb is fixed; the grammar is closed.
struct Instruction {
    ObjectRef object;
    std::variant<QuarterTarget, RelativeTarget> target;

    bool operator==(const Instruction&) const = default;
};

/// An ordered list of instructions; length 4 for the spelling task family.
struct Plan {
    std::vector<Instruction> instructions;

    bool operator==(const Plan&) const = default;
};

// ---------------------------------------------------------------------------
// Symbolic scene state

/// Position and extent of the board in scene units. The board is a 1x4 strip
/// of square cells centered at (cx, cy).
struct BoardPose {
    float cx = 32.0f;
    float cy = 14.0f;
    float cell_size = 12.0f;

    float width() const { return cell_size * kNumQuarters; }
    /// Center of cell i.
    float cell_cx(int i) const { return cx + (static_cast<float>(i) - 1.5f) * cell_size; }
    float cell_cy(int) const { return cy; }

    bool operator==(const BoardPose&) const = default;
};

/// Ground-truth mirror of the rendered scene: board pose, the 4 cells and
/// the tiles still waiting in the staging region.
struct SymbolicState {
    BoardPose board_pose;
    std::array<std::optional<ObjectRef>, kNumQuarters> cells;
    std::vector<Tile> staging;

    bool operator==(const SymbolicState&) const = default;
};

}  // namespace spp::core
