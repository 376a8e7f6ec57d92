#pragma once

#include <string>
#include <vector>

#include "spp/core/domain.hpp"
#include "spp/planner/vocab.hpp"

namespace spp::planner {

/// `<task>[SEP]<instr1>[CSEP]<instr2>[CSEP]<instr3>[CSEP]<instr4>[EOS]`
std::vector<int> serialize_example(const std::string& high_level, const core::Plan& plan,
                                   const Vocabulary& vocab);

struct DeserializedExample {
    std::string high_level;
    std::vector<std::string> instruction_texts;
};

/// Inverse of serialize_example on well-formed sequences.
DeserializedExample deserialize_example(const std::vector<int>& ids, const Vocabulary& vocab);

}  // namespace spp::planner
