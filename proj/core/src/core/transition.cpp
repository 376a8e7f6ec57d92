#include "spp/core/transition.hpp"

#include <algorithm>

#include "spp/core/grammar.hpp"

namespace spp::core {

namespace {

std::string describe(const ObjectRef& o) {
    return std::string(to_string(o.color)) + " " + to_char(o.letter);
}

}  // namespace

int resolve_target_cell(const SymbolicState& state, const Instruction& instr) {
    if (const auto* q = std::get_if<QuarterTarget>(&instr.target)) {
        return q->quarter.index;
    }
    const auto& rel = std::get<RelativeTarget>(instr.target);
    int ref_cell = -1;
    for (int i = 0; i < kNumQuarters; ++i) {
        if (state.cells[i] && *state.cells[i] == rel.reference) {
            ref_cell = i;
            break;
        }
    }
    if (ref_cell < 0) {
        throw ApplyError(ApplyErrorCode::DanglingReference,
                         "reference " + describe(rel.reference) + " is not on the board");
    }
    const int cell = ref_cell + (rel.side == Side::Left ? -1 : 1);
    if (cell < 0 || cell >= kNumQuarters) {
        throw ApplyError(ApplyErrorCode::OffBoard,
                         "no cell on the " + std::string(to_string(rel.side)) + " of " +
                             describe(rel.reference));
    }
    return cell;
}

SymbolicState apply_instruction(const SymbolicState& state, const Instruction& instr) {
    const auto it = std::find_if(
        state.staging.begin(), state.staging.end(), [&](const Tile& t) {
            return ObjectRef{t.color, t.letter} == instr.object;
        });
    if (it == state.staging.end()) {
        throw ApplyError(ApplyErrorCode::MissingObject,
                         describe(instr.object) + " is not in the staging region");
    }
    const int cell = resolve_target_cell(state, instr);
    if (state.cells[cell]) {
        throw ApplyError(ApplyErrorCode::OccupiedCell,
                         std::string(quarter_name(QuarterId{cell})) + " cell already holds " +
                             describe(*state.cells[cell]));
    }
    SymbolicState next = state;
    next.cells[cell] = instr.object;
    next.staging.erase(next.staging.begin() + (it - state.staging.begin()));
    return next;
}

std::optional<std::string> spelled_word(const SymbolicState& state) {
    std::string word;
    for (const auto& cell : state.cells) {
        if (!cell) return std::nullopt;
        word.push_back(to_char(cell->letter));
    }
    return word;
}

}  // namespace spp::core
