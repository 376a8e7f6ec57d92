#pragma once

#include <string>

#include "spp/common/errors.hpp"
#include "spp/core/domain.hpp"

namespace spp::core {

/// Serializes an instruction to exactly one of the two grammar templates:
///   "Pick and place the {color} {letter} on the {quarter} quarter"
///   "Pick and place the {color} {letter} on the {side} of the {ref_color} {ref_letter}"
std::string instruction_to_text(const Instruction& instr);

/// Inverse of instruction_to_text on its image. Case-insensitive on colors
/// and letters. Throws ParseError (with byte offset) for any other text.
Instruction parse_instruction(const std::string& text);

/// High-level task text for a target word: "Spell the word {WORD}".
std::string high_level_text(const std::string& word);

/// Extracts WORD from "Spell the word {WORD}"; ParseError otherwise.
std::string parse_high_level(const std::string& text);

}  // namespace spp::core
