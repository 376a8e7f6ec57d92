#include "spp/lang/dictionary.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "spp/core/grammar.hpp"

namespace spp::lang {

using core::Instruction;

namespace {

const char* group_key(PosGroup g) {
    switch (g) {
        case PosGroup::Verb: return "verbs";
        case PosGroup::Color: return "colors";
        case PosGroup::Letter: return "letters";
        case PosGroup::Relation: return "relations";
    }
    return "?";
}

void collect(const Instruction& instr, std::set<std::string>& colors,
             std::set<std::string>& letters, std::set<std::string>& relations) {
    colors.insert(core::to_string(instr.object.color));
    letters.insert(std::string(1, core::to_char(instr.object.letter)));
    if (const auto* q = std::get_if<core::QuarterTarget>(&instr.target)) {
        relations.insert(core::quarter_name(q->quarter));
    } else {
        const auto& rel = std::get<core::RelativeTarget>(instr.target);
        relations.insert(core::to_string(rel.side));
        colors.insert(core::to_string(rel.reference.color));
        letters.insert(std::string(1, core::to_char(rel.reference.letter)));
    }
}

}  // namespace

int ConceptDictionary::find(PosGroup group, const std::string& name) const {
    for (int i = 0; i < size(); ++i) {
        if (concepts[i].group == group && concepts[i].name == name) return i;
    }
    return -1;
}

std::string ConceptDictionary::to_json() const {
    nlohmann::ordered_json j{{"verbs", nlohmann::json::array()},
                             {"colors", nlohmann::json::array()},
                             {"letters", nlohmann::json::array()},
                             {"relations", nlohmann::json::array()}};
    for (const Concept& c : concepts) j[group_key(c.group)].push_back(c.name);
    return j.dump(2);
}

ConceptDictionary ConceptDictionary::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ConceptDictionary d;
    for (PosGroup g : {PosGroup::Verb, PosGroup::Color, PosGroup::Letter, PosGroup::Relation}) {
        for (const auto& name : j.at(group_key(g))) {
            d.concepts.push_back({g, name.get<std::string>()});
        }
    }
    return d;
}

ConceptDictionary build_dictionary(const std::vector<std::string>& label_corpus) {
    std::set<std::string> colors, letters, relations;
    bool any = false;
    for (const std::string& text : label_corpus) {
        collect(core::parse_instruction(text), colors, letters, relations);
        any = true;
    }
    ConceptDictionary d;
    if (any) d.concepts.push_back({PosGroup::Verb, "pick_place"});
    for (const auto& c : colors) d.concepts.push_back({PosGroup::Color, c});
    for (const auto& l : letters) d.concepts.push_back({PosGroup::Letter, l});
    for (const auto& r : relations) d.concepts.push_back({PosGroup::Relation, r});
    return d;
}

std::vector<float> encode_onehot(const Instruction& instr, const ConceptDictionary& dict) {
    std::vector<float> bits(static_cast<std::size_t>(dict.size()), 0.0f);
    auto set = [&](PosGroup g, const std::string& name) {
        const int i = dict.find(g, name);
        if (i >= 0) bits[static_cast<std::size_t>(i)] = 1.0f;
    };
    set(PosGroup::Verb, "pick_place");
    set(PosGroup::Color, core::to_string(instr.object.color));
    set(PosGroup::Letter, std::string(1, core::to_char(instr.object.letter)));
    if (const auto* q = std::get_if<core::QuarterTarget>(&instr.target)) {
        set(PosGroup::Relation, core::quarter_name(q->quarter));
    } else {
        const auto& rel = std::get<core::RelativeTarget>(instr.target);
        set(PosGroup::Relation, core::to_string(rel.side));
        set(PosGroup::Color, core::to_string(rel.reference.color));
        set(PosGroup::Letter, std::string(1, core::to_char(rel.reference.letter)));
    }
    return bits;
}

}  // namespace spp::lang
