#pragma once

#include <string>
#include <vector>

#include "spp/core/domain.hpp"

namespace spp::lang {

/// Part-of-speech groups of the concept dictionary, in serialization order.
enum class PosGroup { Verb, Color, Letter, Relation };

struct Concept {
    PosGroup group;
    std::string name;  // "pick_place", color name, letter, quarter/side name

    bool operator==(const Concept&) const = default;
};

/// Ordered concept list with dense, stable indices: verbs, then colors,
/// letters, relations/positions, each alphabetical within its group.
struct ConceptDictionary {
    std::vector<Concept> concepts;

    int size() const { return static_cast<int>(concepts.size()); }
    /// -1 when the concept is unknown (the zero-bit path for unseen concepts).
    int find(PosGroup group, const std::string& name) const;

    std::string to_json() const;
    static ConceptDictionary from_json(const std::string& text);

    bool operator==(const ConceptDictionary&) const = default;
};

/// Scans a corpus of instruction texts and collects exactly the concepts that
/// appear, grouped by PoS. Deterministic ordering; ParseError propagates.
ConceptDictionary build_dictionary(const std::vector<std::string>& label_corpus);

/// Binary concept vector, one bit per in-dictionary constituent of the
/// instruction; out-of-dictionary constituents contribute nothing.
std::vector<float> encode_onehot(const core::Instruction& instr, const ConceptDictionary& dict);

}  // namespace spp::lang
