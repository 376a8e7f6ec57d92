#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spp/core/domain.hpp"
#include "spp/planner/model.hpp"

namespace spp::planner {

enum class FailureReason { None, Incomplete, ParseFailure, IllegalMove, WrongWord };

const char* to_string(FailureReason r);

struct ValidationResult {
    std::vector<bool> per_action;  // parses and replays legally, per instruction
    bool task_ok = false;          // full symbolic replay spells the word
    FailureReason failure_reason = FailureReason::None;
};

/// Symbolic replay on an idealized state that grants every referenced
/// (color, letter) tile; validity is independent of the actual scene.
ValidationResult validate_plan(const std::string& word, const std::vector<std::string>& plan_text);

struct PlannerMetrics {
    double action_rate = 0.0;  // over 4 slots per attempted plan
    double task_rate = 0.0;
    int n_words = 0;
    int n_actions = 0;
    double ci95_low = 0.0;  // Wilson interval on the task rate
    double ci95_high = 0.0;
    std::string to_json() const;
};

/// Decodes (n_samples per word, seeds 0..n-1) and validates. Deterministic
/// given the decode seed base.
PlannerMetrics planner_metrics(const PlannerModel& model, const std::vector<std::string>& words,
                               int n_samples, std::uint64_t seed);

/// Same scoring applied to externally produced plans (the oracle path).
PlannerMetrics score_plans(const std::vector<std::pair<std::string, std::vector<std::string>>>&
                               word_plans);

}  // namespace spp::planner
