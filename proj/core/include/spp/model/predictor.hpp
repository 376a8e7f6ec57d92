#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spp/image/image.hpp"
#include "spp/lang/dictionary.hpp"
#include "spp/lang/embedding.hpp"
#include "spp/nn/conv.hpp"
#include "spp/nn/layers.hpp"

namespace spp::model {

constexpr int kPredictorFormatVersion = 1;

enum class ConditioningMode { None, HighLevelOnly, PerStep };
enum class EmbeddingKind { OneHot, Continuous };

const char* to_string(ConditioningMode m);
const char* to_string(EmbeddingKind k);
ConditioningMode mode_from_string(const std::string& s);
EmbeddingKind kind_from_string(const std::string& s);

struct PredictorConfig {
    int resolution = 64;
    int base_ch = 16;   // encoder channels: base, 2x, 4x, 4x
    int d_feat = 128;
    int d_z = 16;
    int slots = 8;      // K (continuous / none)
    int d_slot = 8;
    int d_cond = 64;
    int rnn_hidden = 192;
    int prior_hidden = 128;
    int d_emb = 512;    // continuous embedding input width
    int onehot_dim = 0;  // |dictionary| for the one-hot kind
    float beta = 1e-4f;
    float logvar_min = -12.0f;
    float logvar_max = 8.0f;
    bool skip_connections = true;
    ConditioningMode mode = ConditioningMode::PerStep;
    EmbeddingKind kind = EmbeddingKind::Continuous;
    // training
    int epochs = 30;
    int batch = 8;
    float lr = 2e-3f;
    float grad_clip = 20.0f;
    int horizon = 4;  // keyframes predicted per video
    std::uint64_t seed = 1;

    /// Width of the gate vector / slot bank.
    int d_gate() const {
        return (kind == EmbeddingKind::OneHot && mode != ConditioningMode::None)
                   ? onehot_dim * d_slot
                   : slots * d_slot;
    }

    bool operator==(const PredictorConfig&) const = default;
};

/// Builds per-step conditioning vectors from label texts: the continuous
/// embedding lookup or the one-hot concept bits. Mode `none` produces
/// nothing. Unparseable text under the one-hot kind degrades to the all-zero
/// bit vector (the unseen-concept path), never an exception.
class Conditioner {
public:
    static Conditioner none();
    static Conditioner continuous(lang::EmbeddingTable table, ConditioningMode mode);
    static Conditioner onehot(lang::ConceptDictionary dict, ConditioningMode mode);

    ConditioningMode mode() const { return mode_; }
    EmbeddingKind kind() const { return kind_; }
    int dim() const;  // d_emb or |dictionary|; 0 for mode none
    std::uint32_t checksum() const;
    const lang::ConceptDictionary& dictionary() const { return dict_; }
    const std::optional<lang::EmbeddingTable>& table() const { return table_; }

    /// One vector per step; `high_level` is used for every step in
    /// high_level_only mode, otherwise low_level[t] conditions step t.
    std::vector<std::vector<float>> step_vectors(const std::string& high_level,
                                                 const std::vector<std::string>& low_level,
                                                 int n_steps) const;

private:
    ConditioningMode mode_ = ConditioningMode::None;
    EmbeddingKind kind_ = EmbeddingKind::Continuous;
    std::optional<lang::EmbeddingTable> table_;
    lang::ConceptDictionary dict_;
};

/// One training sequence batch, assembled outside the graph.
struct SeqBatch {
    int n = 0;
    std::vector<nn::Tensor> frames;  // horizon+1 tensors [N,3,H,W]
    std::vector<nn::Tensor> cond;    // horizon tensors [N,dim]; empty in mode none
    std::vector<nn::Tensor> noise;   // horizon tensors [N,d_z]
};

struct LossBreakdown {
    double total = 0.0;
    double reconstruction = 0.0;
    double kl = 0.0;
};

/// The Eq.-style predictor: DCGAN encoder/decoder, gated concept slots,
/// learned recurrent prior/posterior and an LSTM predictor over (c, z).
class VideoPredictor {
public:
    explicit VideoPredictor(const PredictorConfig& cfg);

    const PredictorConfig& config() const { return cfg_; }
    nn::Params& params() { return params_; }
    const nn::Params& params() const { return params_; }

    struct Encoded {
        nn::Var features;              // [N, d_feat]
        std::vector<nn::Var> skips;    // 4 feature maps
    };
    Encoded encode(const nn::Bound& bp, const nn::Var& frames) const;
    nn::Var decode(const nn::Bound& bp, const nn::Var& features,
                   const std::vector<nn::Var>& skips) const;
    std::vector<nn::Var> zero_skips(int n) const;

    /// Gated slot bank + fusion: c = tanh(Phi(g (.) Psi(f))).
    nn::Var condition(const nn::Bound& bp, const nn::Var& features,
                      const std::optional<nn::Var>& cond_input) const;

    struct GaussianHeads {
        nn::Var mu;
        nn::Var logvar;
    };

    /// Sequence loss with teacher forcing and posterior sampling. Returns the
    /// scalar graph node (sum over batch items) and fills `out` with the
    /// per-batch mean breakdown.
    nn::Var build_loss(const nn::Bound& bp, const SeqBatch& batch, LossBreakdown* out) const;

    LossBreakdown compute_loss(const SeqBatch& batch) const;

    /// Autoregressive generation from a real initial frame using prior
    /// samples; each predicted frame is re-encoded as the next input.
    std::vector<img::Image> rollout(const img::Image& o0,
                                    const std::vector<std::vector<float>>& step_cond,
                                    int n_steps, std::uint64_t seed) const;

    void save(const std::string& path, const std::string& extra_meta_json,
              const nn::Adam* optimizer) const;

    img::Image tensor_to_image(const nn::Tensor& t, int row) const;
    static nn::Tensor frames_to_tensor(const std::vector<const img::Image*>& frames);

private:
    PredictorConfig cfg_;
    nn::Params params_;

    struct ConvSpec {
        int w = -1, b = -1;
    };
    struct NormSpec {
        int g = -1, b = -1;
    };
    NormSpec add_norm(const std::string& name, int ch);

    ConvSpec e1_, e2_, e3_, e4_, e5_;
    NormSpec en2_, en3_, en4_;
    ConvSpec d1_, d2_, d3_, d4_, d5_;
    NormSpec dn1_, dn2_, dn3_, dn4_;
    nn::LinearSpec psi_, phi_, gate_;
    nn::LstmSpec prior_lstm_, post_lstm_, pred_lstm_;
    nn::LinearSpec prior_mu_, prior_lv_, post_mu_, post_lv_, pred_out_;

    GaussianHeads gaussian(const nn::Bound& bp, const nn::Var& h, const nn::LinearSpec& mu,
                           const nn::LinearSpec& lv) const;
};

struct LoadedPredictor {
    VideoPredictor model;
    std::string extra_meta_json;
};

LoadedPredictor load_predictor(const std::string& path);

/// Closed-form KL(q || p) for diagonal Gaussians, elementwise over [N, d].
nn::Var gaussian_kl(const nn::Var& mu_q, const nn::Var& logvar_q, const nn::Var& mu_p,
                    const nn::Var& logvar_p);

/// Reference implementation used by the identity tests.
double gaussian_kl_scalar(double mu_q, double logvar_q, double mu_p, double logvar_p);

}  // namespace spp::model
