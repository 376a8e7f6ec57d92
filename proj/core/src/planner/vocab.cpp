#include "spp/planner/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "spp/core/grammar.hpp"

namespace spp::planner {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_letter_token(const std::string& t) {
    return t.size() == 1 && t[0] >= 'A' && t[0] <= 'Z';
}

}  // namespace

Vocabulary::Vocabulary() {
    tokens_ = {"[SEP]", "[CSEP]", "[EOS]"};
    sep_ = 0;
    csep_ = 1;
    eos_ = 2;
    for (const char* w : {"pick", "and", "place", "the", "on", "of", "spell", "word", "quarter",
                          "left", "right", "leftmost", "second", "third", "rightmost"}) {
        tokens_.emplace_back(w);
    }
    for (core::Color c : core::all_colors()) tokens_.emplace_back(core::to_string(c));
    for (core::Letter l : core::all_letters()) tokens_.emplace_back(1, core::to_char(l));
}

int Vocabulary::id(const std::string& token) const {
    for (int i = 0; i < size(); ++i) {
        if (tokens_[static_cast<std::size_t>(i)] == token) return i;
    }
    return -1;
}

std::vector<int> Vocabulary::tokenize(const std::string& text) const {
    std::vector<int> ids;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') ++i;
        if (i >= text.size()) break;
        const std::size_t start = i;
        while (i < text.size() && text[i] != ' ') ++i;
        const std::string w = text.substr(start, i - start);

        if (w.size() > 1 && std::all_of(w.begin(), w.end(), [](char c) {
                return c >= 'A' && c <= 'Z';
            })) {
            for (char c : w) ids.push_back(id(std::string(1, c)));
            continue;
        }
        int tid = -1;
        if (w.size() == 1) {
            if (auto l = core::letter_from_char(w[0])) tid = id(std::string(1, core::to_char(*l)));
        }
        if (tid < 0) tid = id(w);
        if (tid < 0) tid = id(lower(w));
        if (tid < 0) throw ParseError("token \"" + w + "\" outside the planner vocabulary", start);
        ids.push_back(tid);
    }
    return ids;
}

std::string Vocabulary::detokenize(const std::vector<int>& ids) const {
    std::string out;
    bool prev_letter = false;
    for (int tid : ids) {
        const std::string& t = token(tid);
        const bool letter = is_letter_token(t);
        if (!out.empty() && !(letter && prev_letter)) out.push_back(' ');
        out += t;
        prev_letter = letter;
    }
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

}  // namespace spp::planner
