#include "spp/model/predictor.hpp"

#include <json.hpp>

#include <cmath>

#include "spp/core/grammar.hpp"
#include "spp/nn/adam.hpp"

namespace spp::model {

using nn::Var;

const char* to_string(ConditioningMode m) {
    switch (m) {
        case ConditioningMode::None: return "none";
        case ConditioningMode::HighLevelOnly: return "high_level_only";
        case ConditioningMode::PerStep: return "per_step";
    }
    return "?";
}

const char* to_string(EmbeddingKind k) {
    return k == EmbeddingKind::OneHot ? "onehot" : "continuous";
}

ConditioningMode mode_from_string(const std::string& s) {
    if (s == "none") return ConditioningMode::None;
    if (s == "high_level_only") return ConditioningMode::HighLevelOnly;
    if (s == "per_step") return ConditioningMode::PerStep;
    throw ConfigError("unknown conditioning mode \"" + s + "\"");
}

EmbeddingKind kind_from_string(const std::string& s) {
    if (s == "onehot") return EmbeddingKind::OneHot;
    if (s == "continuous") return EmbeddingKind::Continuous;
    throw ConfigError("unknown embedding kind \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// Conditioner

Conditioner Conditioner::none() {
    Conditioner c;
    c.mode_ = ConditioningMode::None;
    return c;
}

Conditioner Conditioner::continuous(lang::EmbeddingTable table, ConditioningMode mode) {
    Conditioner c;
    c.mode_ = mode;
    c.kind_ = EmbeddingKind::Continuous;
    c.table_ = std::move(table);
    return c;
}

Conditioner Conditioner::onehot(lang::ConceptDictionary dict, ConditioningMode mode) {
    Conditioner c;
    c.mode_ = mode;
    c.kind_ = EmbeddingKind::OneHot;
    c.dict_ = std::move(dict);
    return c;
}

int Conditioner::dim() const {
    if (mode_ == ConditioningMode::None) return 0;
    return kind_ == EmbeddingKind::Continuous ? table_->d_emb() : dict_.size();
}

std::uint32_t Conditioner::checksum() const {
    if (mode_ == ConditioningMode::None) return 0;
    if (kind_ == EmbeddingKind::Continuous) return table_->checksum();
    return static_cast<std::uint32_t>(Rng::hash_str(dict_.to_json()));
}

std::vector<std::vector<float>> Conditioner::step_vectors(
    const std::string& high_level, const std::vector<std::string>& low_level,
    int n_steps) const {
    std::vector<std::vector<float>> out;
    if (mode_ == ConditioningMode::None) {
        out.assign(static_cast<std::size_t>(n_steps), {});
        return out;
    }
    for (int t = 0; t < n_steps; ++t) {
        const std::string& text = mode_ == ConditioningMode::HighLevelOnly
                                      ? high_level
                                      : low_level.at(static_cast<std::size_t>(t));
        if (kind_ == EmbeddingKind::Continuous) {
            out.push_back(table_->lookup(text));
        } else {
            try {
                out.push_back(lang::encode_onehot(core::parse_instruction(text), dict_));
            } catch (const ParseError&) {
                out.push_back(std::vector<float>(static_cast<std::size_t>(dict_.size()), 0.0f));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// VideoPredictor

VideoPredictor::NormSpec VideoPredictor::add_norm(const std::string& name, int ch) {
    NormSpec s;
    s.g = params_.add(name + ".g", nn::Tensor::full({ch}, 1.0f));
    s.b = params_.add(name + ".b", nn::Tensor::zeros({ch}));
    return s;
}

VideoPredictor::VideoPredictor(const PredictorConfig& cfg) : cfg_(cfg) {
    if (cfg.resolution % 16 != 0) throw ConfigError("resolution must be divisible by 16");
    if (cfg.kind == EmbeddingKind::OneHot && cfg.mode != ConditioningMode::None &&
        cfg.onehot_dim <= 0) {
        throw ConfigError("one-hot predictor needs onehot_dim (the dictionary size)");
    }
    Rng rng(Rng::mix(cfg.seed, 0x766964ULL));
    const int b = cfg.base_ch;

    auto conv = [&](const std::string& name, int out_ch, int in_ch, int k) {
        ConvSpec s;
        s.w = params_.add(name + ".w", nn::Tensor::randn({out_ch, in_ch, k, k}, rng, 0.02f));
        s.b = params_.add(name + ".b", nn::Tensor::zeros({out_ch}));
        return s;
    };
    auto convT = [&](const std::string& name, int in_ch, int out_ch, int k) {
        ConvSpec s;
        s.w = params_.add(name + ".w", nn::Tensor::randn({in_ch, out_ch, k, k}, rng, 0.02f));
        s.b = params_.add(name + ".b", nn::Tensor::zeros({out_ch}));
        return s;
    };

    e1_ = conv("enc1", b, 3, 4);
    e2_ = conv("enc2", 2 * b, b, 4);
    en2_ = add_norm("enc2.norm", 2 * b);
    e3_ = conv("enc3", 4 * b, 2 * b, 4);
    en3_ = add_norm("enc3.norm", 4 * b);
    e4_ = conv("enc4", 4 * b, 4 * b, 4);
    en4_ = add_norm("enc4.norm", 4 * b);
    e5_ = conv("enc5", cfg.d_feat, 4 * b, cfg.resolution / 16);

    d1_ = convT("dec1", cfg.d_feat, 4 * b, cfg.resolution / 16);
    dn1_ = add_norm("dec1.norm", 4 * b);
    d2_ = convT("dec2", 8 * b, 4 * b, 4);
    dn2_ = add_norm("dec2.norm", 4 * b);
    d3_ = convT("dec3", 8 * b, 2 * b, 4);
    dn3_ = add_norm("dec3.norm", 2 * b);
    d4_ = convT("dec4", 4 * b, 1 * b, 4);
    dn4_ = add_norm("dec4.norm", b);
    d5_ = convT("dec5", 2 * b, 3, 4);

    const int d_gate = cfg_.d_gate();
    psi_ = nn::add_linear(params_, "psi", d_gate, cfg.d_feat, rng);
    phi_ = nn::add_linear(params_, "phi", cfg.d_cond, d_gate, rng);
    if (cfg.kind == EmbeddingKind::Continuous && cfg.mode != ConditioningMode::None) {
        gate_ = nn::add_linear(params_, "gate", d_gate, cfg.d_emb, rng);
    }

    prior_lstm_ = nn::add_lstm(params_, "prior", cfg.d_cond, cfg.prior_hidden, rng);
    prior_mu_ = nn::add_linear(params_, "prior.mu", cfg.d_z, cfg.prior_hidden, rng);
    prior_lv_ = nn::add_linear(params_, "prior.logvar", cfg.d_z, cfg.prior_hidden, rng);
    post_lstm_ = nn::add_lstm(params_, "posterior", cfg.d_feat, cfg.prior_hidden, rng);
    post_mu_ = nn::add_linear(params_, "posterior.mu", cfg.d_z, cfg.prior_hidden, rng);
    post_lv_ = nn::add_linear(params_, "posterior.logvar", cfg.d_z, cfg.prior_hidden, rng);
    pred_lstm_ = nn::add_lstm(params_, "predictor", cfg.d_cond + cfg.d_z, cfg.rnn_hidden, rng);
    pred_out_ = nn::add_linear(params_, "predictor.out", cfg.d_feat, cfg.rnn_hidden, rng);
}

VideoPredictor::Encoded VideoPredictor::encode(const nn::Bound& bp, const Var& frames) const {
    Encoded out;
    Var h1 = nn::leaky_relu(nn::conv2d(frames, bp[e1_.w], bp[e1_.b], 2, 1), 0.2f);
    Var h2 = nn::leaky_relu(
        nn::channel_norm(nn::conv2d(h1, bp[e2_.w], bp[e2_.b], 2, 1), bp[en2_.g], bp[en2_.b]),
        0.2f);
    Var h3 = nn::leaky_relu(
        nn::channel_norm(nn::conv2d(h2, bp[e3_.w], bp[e3_.b], 2, 1), bp[en3_.g], bp[en3_.b]),
        0.2f);
    Var h4 = nn::leaky_relu(
        nn::channel_norm(nn::conv2d(h3, bp[e4_.w], bp[e4_.b], 2, 1), bp[en4_.g], bp[en4_.b]),
        0.2f);
    Var h5 = nn::tanh_act(nn::conv2d(h4, bp[e5_.w], bp[e5_.b], 1, 0));
    out.features = nn::reshape(h5, {h5->value.dim(0), cfg_.d_feat});
    out.skips = {h1, h2, h3, h4};
    return out;
}

std::vector<Var> VideoPredictor::zero_skips(int n) const {
    const int b = cfg_.base_ch;
    const int r = cfg_.resolution;
    return {nn::leaf(nn::Tensor::zeros({n, b, r / 2, r / 2})),
            nn::leaf(nn::Tensor::zeros({n, 2 * b, r / 4, r / 4})),
            nn::leaf(nn::Tensor::zeros({n, 4 * b, r / 8, r / 8})),
            nn::leaf(nn::Tensor::zeros({n, 4 * b, r / 16, r / 16}))};
}

namespace {

Var concat_channels(const Var& a, const Var& b) {
    const int n = a->value.dim(0);
    const int ha = a->value.dim(1);
    const int hb = b->value.dim(1);
    const int hh = a->value.dim(2);
    const int ww = a->value.dim(3);
    // concat along channels via 2-D reshape: [N, C*H*W] columns stay grouped
    Var af = nn::reshape(a, {n, ha * hh * ww});
    Var bf = nn::reshape(b, {n, hb * hh * ww});
    return nn::reshape(nn::concat_cols({af, bf}), {n, ha + hb, hh, ww});
}

}  // namespace

Var VideoPredictor::decode(const nn::Bound& bp, const Var& features,
                           const std::vector<Var>& skips) const {
    const int n = features->value.dim(0);
    Var x = nn::reshape(features, {n, cfg_.d_feat, 1, 1});
    Var h = nn::leaky_relu(
        nn::channel_norm(nn::conv_transpose2d(x, bp[d1_.w], bp[d1_.b], 1, 0), bp[dn1_.g],
                         bp[dn1_.b]),
        0.2f);
    h = concat_channels(h, skips[3]);
    h = nn::leaky_relu(
        nn::channel_norm(nn::conv_transpose2d(h, bp[d2_.w], bp[d2_.b], 2, 1), bp[dn2_.g],
                         bp[dn2_.b]),
        0.2f);
    h = concat_channels(h, skips[2]);
    h = nn::leaky_relu(
        nn::channel_norm(nn::conv_transpose2d(h, bp[d3_.w], bp[d3_.b], 2, 1), bp[dn3_.g],
                         bp[dn3_.b]),
        0.2f);
    h = concat_channels(h, skips[1]);
    h = nn::leaky_relu(
        nn::channel_norm(nn::conv_transpose2d(h, bp[d4_.w], bp[d4_.b], 2, 1), bp[dn4_.g],
                         bp[dn4_.b]),
        0.2f);
    h = concat_channels(h, skips[0]);
    return nn::sigmoid(nn::conv_transpose2d(h, bp[d5_.w], bp[d5_.b], 2, 1));
}

Var VideoPredictor::condition(const nn::Bound& bp, const Var& features,
                              const std::optional<Var>& cond_input) const {
    const int n = features->value.dim(0);
    Var w = nn::apply_linear(bp, psi_, features);  // [N, d_gate] slot bank
    Var gated;
    if (cfg_.mode == ConditioningMode::None) {
        gated = w;  // gates identically 1
    } else if (cfg_.kind == EmbeddingKind::Continuous) {
        Var g = nn::sigmoid(nn::apply_linear(bp, gate_, *cond_input));
        gated = nn::mul(g, w);
    } else {
        // One bit per concept slot, broadcast across the slot's features.
        const nn::Tensor& bits = (*cond_input)->value;
        nn::Tensor g({n, cfg_.d_gate()});
        for (int r = 0; r < n; ++r) {
            for (int cidx = 0; cidx < cfg_.onehot_dim; ++cidx) {
                const float bit = bits.data[static_cast<std::size_t>(r) * cfg_.onehot_dim + cidx];
                for (int j = 0; j < cfg_.d_slot; ++j) {
                    g.data[(static_cast<std::size_t>(r) * cfg_.d_gate()) + cidx * cfg_.d_slot +
                           j] = bit;
                }
            }
        }
        gated = nn::mul(nn::leaf(std::move(g)), w);
    }
    return nn::tanh_act(nn::apply_linear(bp, phi_, gated));
}

VideoPredictor::GaussianHeads VideoPredictor::gaussian(const nn::Bound& bp, const Var& h,
                                                       const nn::LinearSpec& mu,
                                                       const nn::LinearSpec& lv) const {
    GaussianHeads g;
    g.mu = nn::apply_linear(bp, mu, h);
    g.logvar = nn::clamp(nn::apply_linear(bp, lv, h), cfg_.logvar_min, cfg_.logvar_max);
    return g;
}

Var gaussian_kl(const Var& mu_q, const Var& logvar_q, const Var& mu_p, const Var& logvar_p) {
    Var dlv = nn::sub(logvar_p, logvar_q);
    Var ratio = nn::exp_act(nn::neg(dlv));  // sigma_q^2 / sigma_p^2
    Var maha = nn::mul(nn::square(nn::sub(mu_q, mu_p)), nn::exp_act(nn::neg(logvar_p)));
    return nn::scale(nn::add_scalar(nn::add(nn::add(dlv, ratio), maha), -1.0f), 0.5f);
}

double gaussian_kl_scalar(double mu_q, double logvar_q, double mu_p, double logvar_p) {
    const double dlv = logvar_p - logvar_q;
    return 0.5 * (dlv + std::exp(-dlv) +
                  (mu_q - mu_p) * (mu_q - mu_p) * std::exp(-logvar_p) - 1.0);
}

Var VideoPredictor::build_loss(const nn::Bound& bp, const SeqBatch& batch,
                               LossBreakdown* out) const {
    const int n = batch.n;
    const int horizon = static_cast<int>(batch.noise.size());
    nn::LstmState prior_state = nn::lstm_zero_state(prior_lstm_, n);
    nn::LstmState post_state = nn::lstm_zero_state(post_lstm_, n);
    nn::LstmState pred_state = nn::lstm_zero_state(pred_lstm_, n);

    Var recon_sum;  // scalar accumulators
    Var kl_sum;
    for (int t = 0; t < horizon; ++t) {
        Var prev = nn::leaf(batch.frames[static_cast<std::size_t>(t)]);
        Var target = nn::leaf(batch.frames[static_cast<std::size_t>(t) + 1]);
        Encoded enc_prev = encode(bp, prev);
        std::optional<Var> cond_in;
        if (cfg_.mode != ConditioningMode::None) {
            cond_in = nn::leaf(batch.cond[static_cast<std::size_t>(t)]);
        }
        Var c = condition(bp, enc_prev.features, cond_in);

        auto [ph, pstate] = nn::lstm_step(bp, prior_lstm_, c, prior_state);
        prior_state = pstate;
        GaussianHeads prior = gaussian(bp, ph, prior_mu_, prior_lv_);

        Encoded enc_tgt = encode(bp, target);
        auto [qh, qstate] = nn::lstm_step(bp, post_lstm_, enc_tgt.features, post_state);
        post_state = qstate;
        GaussianHeads post = gaussian(bp, qh, post_mu_, post_lv_);

        Var eps = nn::leaf(batch.noise[static_cast<std::size_t>(t)]);
        Var z = nn::add(post.mu, nn::mul(nn::exp_act(nn::scale(post.logvar, 0.5f)), eps));

        auto [hh, hstate] = nn::lstm_step(bp, pred_lstm_, nn::concat_cols({c, z}), pred_state);
        pred_state = hstate;
        Var f_hat = nn::tanh_act(nn::apply_linear(bp, pred_out_, hh));
        Var pred_frame = decode(bp, f_hat,
                                cfg_.skip_connections ? enc_prev.skips : zero_skips(n));

        Var recon_t = nn::mse_loss(pred_frame, target);  // mean over N*3HW
        Var kl_t = nn::scale(nn::sum_all(gaussian_kl(post.mu, post.logvar, prior.mu,
                                                     prior.logvar)),
                             1.0f / static_cast<float>(n));  // mean over N, sum over d_z
        recon_sum = t == 0 ? recon_t : nn::add(recon_sum, recon_t);
        kl_sum = t == 0 ? kl_t : nn::add(kl_sum, kl_t);
    }
    const float inv_t = 1.0f / static_cast<float>(horizon);
    Var recon = nn::scale(recon_sum, inv_t);
    Var kl = nn::scale(kl_sum, inv_t);
    Var total = nn::add(recon, nn::scale(kl, cfg_.beta));
    if (out) {
        out->reconstruction = recon->value.data[0];
        out->kl = kl->value.data[0];
        out->total = total->value.data[0];
    }
    // Sum over items so data-parallel chunks reduce exactly.
    return nn::scale(total, static_cast<float>(n));
}

LossBreakdown VideoPredictor::compute_loss(const SeqBatch& batch) const {
    nn::Bound bp = nn::bind(params_, false);
    LossBreakdown out;
    build_loss(bp, batch, &out);
    return out;
}

nn::Tensor VideoPredictor::frames_to_tensor(const std::vector<const img::Image*>& frames) {
    const int n = static_cast<int>(frames.size());
    const int h = frames[0]->h;
    const int w = frames[0]->w;
    nn::Tensor t({n, 3, h, w});
    for (int i = 0; i < n; ++i) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const float* p = frames[static_cast<std::size_t>(i)]->px(y, x);
                for (int ch = 0; ch < 3; ++ch) {
                    t.data[((static_cast<std::size_t>(i) * 3 + ch) * h + y) * w + x] = p[ch];
                }
            }
        }
    }
    return t;
}

img::Image VideoPredictor::tensor_to_image(const nn::Tensor& t, int row) const {
    const int h = t.dim(2);
    const int w = t.dim(3);
    img::Image im(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float* p = im.px(y, x);
            for (int ch = 0; ch < 3; ++ch) {
                p[ch] = t.data[((static_cast<std::size_t>(row) * 3 + ch) * h + y) * w + x];
            }
        }
    }
    im.clamp01();
    return im;
}

std::vector<img::Image> VideoPredictor::rollout(const img::Image& o0,
                                                const std::vector<std::vector<float>>& step_cond,
                                                int n_steps, std::uint64_t seed) const {
    if (cfg_.mode == ConditioningMode::PerStep &&
        static_cast<int>(step_cond.size()) != n_steps) {
        throw ConfigError("per_step rollout needs one conditioning vector per step");
    }
    Rng rng(Rng::mix(cfg_.seed, Rng::mix(seed, 0x726f6cULL)));
    nn::Bound bp = nn::bind(params_, false);
    nn::LstmState prior_state = nn::lstm_zero_state(prior_lstm_, 1);
    nn::LstmState pred_state = nn::lstm_zero_state(pred_lstm_, 1);

    std::vector<img::Image> out;
    nn::Tensor cur = frames_to_tensor({&o0});
    for (int t = 0; t < n_steps; ++t) {
        Var prev = nn::leaf(cur);
        Encoded enc = encode(bp, prev);
        std::optional<Var> cond_in;
        if (cfg_.mode != ConditioningMode::None) {
            const auto& vec = step_cond.at(static_cast<std::size_t>(t));
            nn::Tensor ct({1, static_cast<int>(vec.size())}, std::vector<float>(vec));
            cond_in = nn::leaf(std::move(ct));
        }
        Var c = condition(bp, enc.features, cond_in);
        auto [ph, pstate] = nn::lstm_step(bp, prior_lstm_, c, prior_state);
        prior_state = pstate;
        GaussianHeads prior = gaussian(bp, ph, prior_mu_, prior_lv_);

        nn::Tensor eps({1, cfg_.d_z});
        for (float& e : eps.data) e = rng.normal_f();
        Var z = nn::add(prior.mu,
                        nn::mul(nn::exp_act(nn::scale(prior.logvar, 0.5f)), nn::leaf(eps)));
        auto [hh, hstate] = nn::lstm_step(bp, pred_lstm_, nn::concat_cols({c, z}), pred_state);
        pred_state = hstate;
        Var f_hat = nn::tanh_act(nn::apply_linear(bp, pred_out_, hh));
        Var frame = decode(bp, f_hat, cfg_.skip_connections ? enc.skips : zero_skips(1));
        cur = frame->value;
        out.push_back(tensor_to_image(cur, 0));
    }
    return out;
}

void VideoPredictor::save(const std::string& path, const std::string& extra_meta_json,
                          const nn::Adam* optimizer) const {
    nlohmann::ordered_json meta{
        {"format_version", kPredictorFormatVersion},
        {"kind", "predictor"},
        {"config",
         {{"resolution", cfg_.resolution},
          {"base_ch", cfg_.base_ch},
          {"d_feat", cfg_.d_feat},
          {"d_z", cfg_.d_z},
          {"slots", cfg_.slots},
          {"d_slot", cfg_.d_slot},
          {"d_cond", cfg_.d_cond},
          {"rnn_hidden", cfg_.rnn_hidden},
          {"prior_hidden", cfg_.prior_hidden},
          {"d_emb", cfg_.d_emb},
          {"onehot_dim", cfg_.onehot_dim},
          {"beta", cfg_.beta},
          {"logvar_min", cfg_.logvar_min},
          {"logvar_max", cfg_.logvar_max},
          {"skip_connections", cfg_.skip_connections},
          {"mode", to_string(cfg_.mode)},
          {"embedding_kind", to_string(cfg_.kind)},
          {"epochs", cfg_.epochs},
          {"batch", cfg_.batch},
          {"lr", cfg_.lr},
          {"grad_clip", cfg_.grad_clip},
          {"horizon", cfg_.horizon},
          {"seed", cfg_.seed}}},
        {"extra", extra_meta_json.empty() ? nlohmann::ordered_json::object()
                                          : nlohmann::ordered_json::parse(extra_meta_json)}};

    nn::Params all = params_;
    if (optimizer && !const_cast<nn::Adam*>(optimizer)->m().empty()) {
        meta["adam_t"] = optimizer->t();
        auto* opt = const_cast<nn::Adam*>(optimizer);
        for (std::size_t i = 0; i < params_.count(); ++i) {
            all.add("adam.m." + params_.names[i], opt->m()[i]);
            all.add("adam.v." + params_.names[i], opt->v()[i]);
        }
    }
    nn::save_container(path, meta.dump(), all);
}

LoadedPredictor load_predictor(const std::string& path) {
    nn::Container c = nn::load_container(path);
    nlohmann::json meta = nlohmann::json::parse(c.meta_json);
    if (meta.at("format_version").get<int>() != kPredictorFormatVersion ||
        meta.at("kind").get<std::string>() != "predictor") {
        throw VersionMismatch(path + " is not a predictor checkpoint");
    }
    const auto& j = meta.at("config");
    PredictorConfig cfg;
    cfg.resolution = j.at("resolution").get<int>();
    cfg.base_ch = j.at("base_ch").get<int>();
    cfg.d_feat = j.at("d_feat").get<int>();
    cfg.d_z = j.at("d_z").get<int>();
    cfg.slots = j.at("slots").get<int>();
    cfg.d_slot = j.at("d_slot").get<int>();
    cfg.d_cond = j.at("d_cond").get<int>();
    cfg.rnn_hidden = j.at("rnn_hidden").get<int>();
    cfg.prior_hidden = j.at("prior_hidden").get<int>();
    cfg.d_emb = j.at("d_emb").get<int>();
    cfg.onehot_dim = j.at("onehot_dim").get<int>();
    cfg.beta = j.at("beta").get<float>();
    cfg.logvar_min = j.at("logvar_min").get<float>();
    cfg.logvar_max = j.at("logvar_max").get<float>();
    cfg.skip_connections = j.at("skip_connections").get<bool>();
    cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    cfg.kind = kind_from_string(j.at("embedding_kind").get<std::string>());
    cfg.epochs = j.at("epochs").get<int>();
    cfg.batch = j.at("batch").get<int>();
    cfg.lr = j.at("lr").get<float>();
    cfg.grad_clip = j.at("grad_clip").get<float>();
    cfg.horizon = j.at("horizon").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();

    LoadedPredictor out{VideoPredictor(cfg), meta.at("extra").dump()};
    nn::Params& mp = out.model.params();
    for (std::size_t i = 0; i < mp.count(); ++i) {
        const int k = c.params.find(mp.names[i]);
        if (k < 0) {
            throw CorruptDataset("predictor checkpoint missing " + mp.names[i]);
        }
        if (!c.params.at(k).same_shape(mp.at(static_cast<int>(i)))) {
            throw VersionMismatch("predictor parameter shape changed: " + mp.names[i]);
        }
        mp.at(static_cast<int>(i)) = c.params.at(k);
    }
    return out;
}

}  // namespace spp::model
