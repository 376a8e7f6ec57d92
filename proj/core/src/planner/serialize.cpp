#include "spp/planner/serialize.hpp"

#include "spp/core/grammar.hpp"

namespace spp::planner {

std::vector<int> serialize_example(const std::string& high_level, const core::Plan& plan,
                                   const Vocabulary& vocab) {
    std::vector<int> ids = vocab.tokenize(high_level);
    ids.push_back(vocab.sep());
    for (std::size_t i = 0; i < plan.instructions.size(); ++i) {
        if (i) ids.push_back(vocab.csep());
        const std::vector<int> instr = vocab.tokenize(
            core::instruction_to_text(plan.instructions[i]));
        ids.insert(ids.end(), instr.begin(), instr.end());
    }
    ids.push_back(vocab.eos());
    return ids;
}

DeserializedExample deserialize_example(const std::vector<int>& ids, const Vocabulary& vocab) {
    DeserializedExample out;
    std::vector<int> segment;
    bool in_task = true;
    for (int tid : ids) {
        if (tid == vocab.sep()) {
            if (!in_task) throw DecodeError("unexpected [SEP] inside the plan");
            out.high_level = vocab.detokenize(segment);
            segment.clear();
            in_task = false;
        } else if (tid == vocab.csep()) {
            if (in_task) throw DecodeError("[CSEP] before [SEP]");
            out.instruction_texts.push_back(vocab.detokenize(segment));
            segment.clear();
        } else if (tid == vocab.eos()) {
            if (in_task) throw DecodeError("[EOS] before [SEP]");
            out.instruction_texts.push_back(vocab.detokenize(segment));
            return out;
        } else {
            segment.push_back(tid);
        }
    }
    throw DecodeError("sequence ended without [EOS]");
}

}  // namespace spp::planner
