#pragma once

#include <optional>
#include <string>

#include "spp/common/errors.hpp"
#include "spp/core/domain.hpp"

namespace spp::core {

/// Resolves an instruction's target to a cell index without mutating state.
/// Throws DanglingReference / OffBoard; does not check occupancy.
int resolve_target_cell(const SymbolicState& state, const Instruction& instr);

/// Pure symbolic executor: moves instr.object from staging to the resolved
/// cell and returns the new state. Strict: throws ApplyError when any
/// precondition is violated (MissingObject, DanglingReference, OffBoard,
/// OccupiedCell) instead of skipping.
SymbolicState apply_instruction(const SymbolicState& state, const Instruction& instr);

/// The 4 cell letters read left to right, if all cells are occupied.
std::optional<std::string> spelled_word(const SymbolicState& state);

}  // namespace spp::core
