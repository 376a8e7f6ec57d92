#include "spp/planner/oracle.hpp"

#include <vector>

#include "spp/common/rng.hpp"
#include "spp/core/grammar.hpp"

namespace spp::planner {

using core::Instruction;
using core::ObjectRef;
using core::Plan;
using core::QuarterId;
using core::QuarterTarget;
using core::RelativeTarget;
using core::Side;

Plan oracle_plan(const std::string& word, const datagen::Scene& scene, std::uint64_t seed) {
    datagen::validate_word(word);
    std::array<ObjectRef, 4> objects{};
    for (int i = 0; i < 4; ++i) {
        const core::Tile& t = datagen::tile_for_letter(scene, *core::letter_from_char(word[i]));
        objects[i] = ObjectRef{t.color, t.letter};
    }

    Rng rng(Rng::mix(Rng::hash_str(word), Rng::mix(seed, 0x706c616eULL)));
    std::vector<int> order = {0, 1, 2, 3};
    rng.shuffle(order);

    Plan plan;
    std::array<bool, 4> placed{};
    for (int pos : order) {
        Instruction instr;
        instr.object = objects[pos];
        if (pos > 0 && placed[pos - 1]) {
            instr.target = RelativeTarget{Side::Right, objects[pos - 1]};
        } else if (pos < 3 && placed[pos + 1]) {
            instr.target = RelativeTarget{Side::Left, objects[pos + 1]};
        } else {
            instr.target = QuarterTarget{QuarterId{pos}};
        }
        placed[pos] = true;
        plan.instructions.push_back(instr);
    }
    return plan;
}

}  // namespace spp::planner
