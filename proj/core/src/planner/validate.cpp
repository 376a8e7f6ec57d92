#include "spp/planner/validate.hpp"

#include <json.hpp>

#include <cmath>

#include "spp/core/grammar.hpp"
#include "spp/core/transition.hpp"

namespace spp::planner {

const char* to_string(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::Incomplete: return "incomplete";
        case FailureReason::ParseFailure: return "parse_failure";
        case FailureReason::IllegalMove: return "illegal_move";
        case FailureReason::WrongWord: return "wrong_word";
    }
    return "?";
}

ValidationResult validate_plan(const std::string& word,
                               const std::vector<std::string>& plan_text) {
    ValidationResult r;
    core::SymbolicState state;  // board only; staging granted on demand
    bool all_applied = true;
    for (const std::string& text : plan_text) {
        core::Instruction instr;
        try {
            instr = core::parse_instruction(text);
        } catch (const ParseError&) {
            r.per_action.push_back(false);
            all_applied = false;
            if (r.failure_reason == FailureReason::None) {
                r.failure_reason = FailureReason::ParseFailure;
            }
            continue;
        }
        bool on_board = false;
        for (const auto& c : state.cells) {
            if (c && *c == instr.object) on_board = true;
        }
        if (on_board) {
            r.per_action.push_back(false);
            all_applied = false;
            if (r.failure_reason == FailureReason::None) {
                r.failure_reason = FailureReason::IllegalMove;
            }
            continue;
        }
        state.staging = {core::Tile{instr.object.letter, instr.object.color, 0.0f, 0.0f, 0.0f}};
        try {
            state = core::apply_instruction(state, instr);
            r.per_action.push_back(true);
        } catch (const ApplyError&) {
            state.staging.clear();
            r.per_action.push_back(false);
            all_applied = false;
            if (r.failure_reason == FailureReason::None) {
                r.failure_reason = FailureReason::IllegalMove;
            }
        }
    }
    if (plan_text.size() != 4) {
        r.task_ok = false;
        r.failure_reason = FailureReason::Incomplete;
        return r;
    }
    const auto spelled = core::spelled_word(state);
    r.task_ok = all_applied && spelled.has_value() && *spelled == word;
    if (!r.task_ok && r.failure_reason == FailureReason::None) {
        r.failure_reason = spelled.has_value() ? FailureReason::WrongWord
                                               : FailureReason::Incomplete;
    }
    return r;
}

namespace {

void wilson_interval(int successes, int n, double& lo, double& hi) {
    if (n == 0) {
        lo = hi = 0.0;
        return;
    }
    const double z = 1.959963985;
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double margin = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    lo = (center - margin) / denom;
    hi = (center + margin) / denom;
}

PlannerMetrics score(const std::vector<std::pair<std::string, std::vector<std::string>>>& plans) {
    PlannerMetrics m;
    int action_ok = 0;
    int task_ok = 0;
    for (const auto& [word, texts] : plans) {
        const ValidationResult r = validate_plan(word, texts);
        // 4 action slots per attempt; missing segments count as failures,
        // extras are ignored.
        for (int i = 0; i < 4; ++i) {
            if (i < static_cast<int>(r.per_action.size()) && r.per_action[i]) ++action_ok;
        }
        m.n_actions += 4;
        if (r.task_ok) ++task_ok;
        ++m.n_words;
    }
    m.action_rate = m.n_actions ? static_cast<double>(action_ok) / m.n_actions : 0.0;
    m.task_rate = m.n_words ? static_cast<double>(task_ok) / m.n_words : 0.0;
    wilson_interval(task_ok, m.n_words, m.ci95_low, m.ci95_high);
    return m;
}

}  // namespace

std::string PlannerMetrics::to_json() const {
    nlohmann::ordered_json j{{"action_rate", action_rate},
                             {"task_rate", task_rate},
                             {"n_words", n_words},
                             {"n_actions", n_actions},
                             {"ci95", {ci95_low, ci95_high}}};
    return j.dump(2);
}

PlannerMetrics planner_metrics(const PlannerModel& model, const std::vector<std::string>& words,
                               int n_samples, std::uint64_t seed) {
    if (words.empty()) throw ConfigError("planner_metrics: no test words");
    std::vector<std::pair<std::string, std::vector<std::string>>> plans;
    for (const std::string& word : words) {
        for (int s = 0; s < std::max(1, n_samples); ++s) {
            plans.emplace_back(word,
                               model.decode_texts(core::high_level_text(word),
                                                  Rng::mix(seed, static_cast<std::uint64_t>(s))));
        }
    }
    return score(plans);
}

PlannerMetrics score_plans(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& word_plans) {
    return score(word_plans);
}

}  // namespace spp::planner
