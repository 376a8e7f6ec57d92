#include "spp/core/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace spp::core {

namespace {

std::optional<Letter> letter_from_token(const std::string& tok) {
    if (tok.size() != 1) return std::nullopt;
    return letter_from_char(tok[0]);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct TokenStream {
    std::vector<std::string> tokens;
    std::vector<std::size_t> offsets;
    std::size_t pos = 0;
    std::size_t text_size = 0;

    explicit TokenStream(const std::string& text) {
        text_size = text.size();
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && text[i] == ' ') ++i;
            if (i >= text.size()) break;
            std::size_t start = i;
            while (i < text.size() && text[i] != ' ') ++i;
            tokens.push_back(text.substr(start, i - start));
            offsets.push_back(start);
        }
    }

    std::size_t offset() const { return pos < offsets.size() ? offsets[pos] : text_size; }

    const std::string& next(const char* expected) {
        if (pos >= tokens.size()) {
            throw ParseError(std::string("expected ") + expected + ", got end of text", offset());
        }
        return tokens[pos++];
    }

    /// Consumes a literal template word (case-insensitive).
    void literal(const char* word) {
        std::size_t at = offset();
        const std::string& tok = next(word);
        if (lower(tok) != word) {
            throw ParseError(std::string("expected \"") + word + "\", got \"" + tok + "\"", at);
        }
    }

    Color color() {
        std::size_t at = offset();
        const std::string& tok = next("a color");
        auto c = color_from_string(tok);
        if (!c) throw ParseError("unknown color \"" + tok + "\"", at);
        return *c;
    }

    Letter letter() {
        std::size_t at = offset();
        const std::string& tok = next("a letter");
        auto l = letter_from_token(tok);
        if (!l) throw ParseError("expected a single letter, got \"" + tok + "\"", at);
        return *l;
    }

    void done() {
        if (pos != tokens.size()) {
            throw ParseError("trailing text \"" + tokens[pos] + "\"", offset());
        }
    }
};

}  // namespace

std::optional<Letter> letter_from_char(char c) {
    if (c >= 'A' && c <= 'Z') return static_cast<Letter>(c - 'A');
    if (c >= 'a' && c <= 'z') return static_cast<Letter>(c - 'a');
    return std::nullopt;
}

std::array<Letter, kNumLetters> all_letters() {
    std::array<Letter, kNumLetters> out{};
    for (int i = 0; i < kNumLetters; ++i) out[i] = static_cast<Letter>(i);
    return out;
}

std::array<Color, kNumColors> all_colors() {
    return {Color::Red, Color::Green, Color::Blue, Color::Yellow, Color::Purple, Color::Orange};
}

const char* to_string(Color c) {
    switch (c) {
        case Color::Red: return "red";
        case Color::Green: return "green";
        case Color::Blue: return "blue";
        case Color::Yellow: return "yellow";
        case Color::Purple: return "purple";
        case Color::Orange: return "orange";
    }
    return "?";
}

std::optional<Color> color_from_string(const std::string& name) {
    const std::string n = lower(name);
    for (Color c : all_colors()) {
        if (n == to_string(c)) return c;
    }
    return std::nullopt;
}

std::array<float, 3> rgb(Color c) {
    switch (c) {
        case Color::Red: return {0.90f, 0.10f, 0.10f};
        case Color::Green: return {0.10f, 0.80f, 0.10f};
        case Color::Blue: return {0.15f, 0.25f, 0.95f};
        case Color::Yellow: return {0.95f, 0.85f, 0.10f};
        case Color::Purple: return {0.60f, 0.15f, 0.85f};
        case Color::Orange: return {0.95f, 0.55f, 0.05f};
    }
    return {1.0f, 1.0f, 1.0f};
}

const char* quarter_name(QuarterId q) {
    switch (q.index) {
        case 0: return "leftmost";
        case 1: return "second";
        case 2: return "third";
        case 3: return "rightmost";
    }
    return "?";
}

std::optional<QuarterId> quarter_from_string(const std::string& name) {
    const std::string n = lower(name);
    for (int i = 0; i < kNumQuarters; ++i) {
        if (n == quarter_name(QuarterId{i})) return QuarterId{i};
    }
    return std::nullopt;
}

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string instruction_to_text(const Instruction& instr) {
    std::ostringstream out;
    out << "Pick and place the " << to_string(instr.object.color) << ' '
        << to_char(instr.object.letter) << " on the ";
    if (const auto* q = std::get_if<QuarterTarget>(&instr.target)) {
        out << quarter_name(q->quarter) << " quarter";
    } else {
        const auto& rel = std::get<RelativeTarget>(instr.target);
        out << to_string(rel.side) << " of the " << to_string(rel.reference.color) << ' '
            << to_char(rel.reference.letter);
    }
    return out.str();
}

Instruction parse_instruction(const std::string& text) {
    TokenStream ts(text);
    ts.literal("pick");
    ts.literal("and");
    ts.literal("place");
    ts.literal("the");
    Instruction instr;
    instr.object.color = ts.color();
    instr.object.letter = ts.letter();
    ts.literal("on");
    ts.literal("the");

    // Next token decides the template: a side, or a quarter name.
    std::size_t at = ts.offset();
    const std::string tok = lower(ts.next("a side or quarter name"));
    if (tok == "left" || tok == "right") {
        RelativeTarget rel;
        rel.side = tok == "left" ? Side::Left : Side::Right;
        ts.literal("of");
        ts.literal("the");
        rel.reference.color = ts.color();
        rel.reference.letter = ts.letter();
        instr.target = rel;
    } else if (auto q = quarter_from_string(tok)) {
        ts.literal("quarter");
        instr.target = QuarterTarget{*q};
    } else {
        throw ParseError("expected a side or quarter name, got \"" + tok + "\"", at);
    }
    ts.done();
    return instr;
}

std::string high_level_text(const std::string& word) { return "Spell the word " + word; }

std::string parse_high_level(const std::string& text) {
    TokenStream ts(text);
    ts.literal("spell");
    ts.literal("the");
    ts.literal("word");
    std::size_t at = ts.offset();
    std::string word = ts.next("a word");
    ts.done();
    for (char& c : word) {
        auto l = letter_from_char(c);
        if (!l) throw ParseError("word contains a non-letter character", at);
        c = to_char(*l);
    }
    return word;
}

}  // namespace spp::core
