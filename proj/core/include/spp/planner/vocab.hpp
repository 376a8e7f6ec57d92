#pragma once

#include <string>
#include <vector>

#include "spp/common/errors.hpp"

namespace spp::planner {

/// The closed token set of the planning grammar: delimiters, template words,
/// the 26 letters, 6 colors, 4 quarter names and 2 sides. Fixed and
/// independent of any corpus, so every label string tokenizes losslessly.
class Vocabulary {
public:
    Vocabulary();

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::string& token(int id) const { return tokens_[static_cast<std::size_t>(id)]; }
    int id(const std::string& token) const;  // -1 if absent

    int sep() const { return sep_; }
    int csep() const { return csep_; }
    int eos() const { return eos_; }

    /// Splits on spaces; multi-letter all-caps words (the task's target word)
    /// become per-letter tokens. ParseError on anything outside the set.
    std::vector<int> tokenize(const std::string& text) const;

    /// Inverse of tokenize on the grammar's image: consecutive letter tokens
    /// merge back into a word, the first word is capitalized.
    std::string detokenize(const std::vector<int>& ids) const;

    std::vector<std::string> token_list() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    int sep_ = -1, csep_ = -1, eos_ = -1;
};

}  // namespace spp::planner
