#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spp/nn/layers.hpp"
#include "spp/planner/serialize.hpp"

namespace spp::planner {

constexpr int kPlannerFormatVersion = 1;

struct PlannerConfig {
    int d_model = 64;
    int n_layers = 2;
    int n_heads = 4;
    int d_ff = 128;
    int max_seq = 64;
    // training
    int epochs = 60;
    int batch = 16;
    float lr = 1e-3f;
    float grad_clip = 1.0f;
    std::uint64_t seed = 1;
    // decoding
    bool sampled = false;   // greedy by default
    float temperature = 1.0f;

    bool operator==(const PlannerConfig&) const = default;
};

/// Small causal transformer over the closed planner vocabulary.
class PlannerModel {
public:
    explicit PlannerModel(const PlannerConfig& cfg);

    const PlannerConfig& config() const { return cfg_; }
    const Vocabulary& vocab() const { return vocab_; }
    nn::Params& params() { return params_; }
    const nn::Params& params() const { return params_; }

    /// Next-token logits for a full sequence: [T, V].
    nn::Var forward(const nn::Bound& bp, const std::vector<int>& ids) const;

    /// Autoregressive decode after `<task>[SEP]` until [EOS] or max length.
    /// Returns the raw generated segment texts (no validation).
    std::vector<std::string> decode_texts(const std::string& high_level,
                                          std::uint64_t seed) const;

    void save(const std::string& path) const;
    static PlannerModel load(const std::string& path);

private:
    PlannerConfig cfg_;
    Vocabulary vocab_;
    nn::Params params_;
    int tok_emb_ = -1;
    int pos_emb_ = -1;
    struct Layer {
        int ln1_g, ln1_b;
        nn::LinearSpec qkv, attn_out;
        int ln2_g, ln2_b;
        nn::LinearSpec ff1, ff2;
    };
    std::vector<Layer> layers_;
    int lnf_g_ = -1, lnf_b_ = -1;
    nn::LinearSpec head_;
};

struct TrainTrace {
    std::vector<double> epoch_loss;
};

/// Next-token cross-entropy on serialized (task, plan) pairs.
/// Throws ConfigError for degenerate hyperparameters or an empty dataset.
std::pair<PlannerModel, TrainTrace> train_planner(
    const std::vector<std::pair<std::string, core::Plan>>& pairs, const PlannerConfig& cfg,
    int workers);

/// Strict decode: exactly 4 parseable instructions or DecodeError.
core::Plan plan(const PlannerModel& model, const std::string& high_level, std::uint64_t seed);

}  // namespace spp::planner
