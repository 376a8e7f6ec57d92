#include "spp/datagen/demo.hpp"

#include "spp/core/grammar.hpp"
#include "spp/core/transition.hpp"
#include "spp/planner/oracle.hpp"

namespace spp::datagen {

core::Plan scripted_policy(const Scene& scene, std::uint64_t seed) {
    return planner::oracle_plan(scene.word, scene, seed);
}

Demonstration generate_demonstration(const std::string& word, std::uint64_t seed,
                                     const DatagenConfig& cfg) {
    Demonstration demo;
    demo.scene = generate_scene(word, seed, cfg);
    demo.high_level = core::high_level_text(word);

    const core::Plan plan = scripted_policy(demo.scene, seed);
    demo.states.push_back(demo.scene.state0);
    for (const core::Instruction& instr : plan.instructions) {
        demo.low_level.push_back(core::instruction_to_text(instr));
        demo.states.push_back(core::apply_instruction(demo.states.back(), instr));
    }
    const auto spelled = core::spelled_word(demo.states.back());
    if (!spelled || *spelled != word) {
        throw Error("scripted policy failed to spell \"" + word + "\"");
    }
    for (const core::SymbolicState& st : demo.states) {
        demo.frames.push_back(render_frame(st, cfg.render));
    }
    return demo;
}

}  // namespace spp::datagen
