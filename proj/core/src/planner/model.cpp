#include "spp/planner/model.hpp"

#include <json.hpp>

#include <cmath>

#include "spp/core/grammar.hpp"
#include "spp/nn/adam.hpp"

namespace spp::planner {

using nn::Var;

PlannerModel::PlannerModel(const PlannerConfig& cfg) : cfg_(cfg) {
    if (cfg.d_model % cfg.n_heads != 0) throw ConfigError("d_model must divide by n_heads");
    Rng rng(Rng::mix(cfg.seed, 0x706c6eULL));
    const int v = vocab_.size();
    tok_emb_ = params_.add("tok_emb", nn::Tensor::randn({v, cfg.d_model}, rng, 0.02f));
    pos_emb_ = params_.add("pos_emb", nn::Tensor::randn({cfg.max_seq, cfg.d_model}, rng, 0.02f));
    for (int l = 0; l < cfg.n_layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        Layer layer;
        layer.ln1_g = params_.add(p + "ln1.g", nn::Tensor::full({cfg.d_model}, 1.0f));
        layer.ln1_b = params_.add(p + "ln1.b", nn::Tensor::zeros({cfg.d_model}));
        layer.qkv = nn::add_linear(params_, p + "qkv", 3 * cfg.d_model, cfg.d_model, rng);
        layer.attn_out = nn::add_linear(params_, p + "attn_out", cfg.d_model, cfg.d_model, rng);
        layer.ln2_g = params_.add(p + "ln2.g", nn::Tensor::full({cfg.d_model}, 1.0f));
        layer.ln2_b = params_.add(p + "ln2.b", nn::Tensor::zeros({cfg.d_model}));
        layer.ff1 = nn::add_linear(params_, p + "ff1", cfg.d_ff, cfg.d_model, rng);
        layer.ff2 = nn::add_linear(params_, p + "ff2", cfg.d_model, cfg.d_ff, rng);
        layers_.push_back(layer);
    }
    lnf_g_ = params_.add("lnf.g", nn::Tensor::full({cfg.d_model}, 1.0f));
    lnf_b_ = params_.add("lnf.b", nn::Tensor::zeros({cfg.d_model}));
    head_ = nn::add_linear(params_, "head", v, cfg.d_model, rng);
}

Var PlannerModel::forward(const nn::Bound& bp, const std::vector<int>& ids) const {
    const int t = static_cast<int>(ids.size());
    if (t > cfg_.max_seq) throw DecodeError("sequence exceeds the planner context length");
    const int d = cfg_.d_model;
    const int h = cfg_.n_heads;
    const int dh = d / h;

    std::vector<int> positions(ids.size());
    for (int i = 0; i < t; ++i) positions[static_cast<std::size_t>(i)] = i;
    Var x = nn::add(nn::embedding_lookup(bp[tok_emb_], ids),
                    nn::embedding_lookup(bp[pos_emb_], positions));

    // Additive causal mask, shared across heads: [H, T, T].
    nn::Tensor mask({h, t, t});
    for (int head = 0; head < h; ++head) {
        for (int i = 0; i < t; ++i) {
            for (int j = 0; j < t; ++j) {
                mask.data[(static_cast<std::size_t>(head) * t + i) * t + j] =
                    j > i ? -1e9f : 0.0f;
            }
        }
    }
    Var mask_v = nn::leaf(std::move(mask));

    for (const Layer& layer : layers_) {
        Var hnorm = nn::layer_norm_rows(x, bp[layer.ln1_g], bp[layer.ln1_b]);
        Var qkv = nn::apply_linear(bp, layer.qkv, hnorm);  // [T, 3D]
        Var q = nn::permute3(nn::reshape(nn::slice_cols(qkv, 0, d), {t, h, dh}), 1, 0, 2);
        Var k = nn::permute3(nn::reshape(nn::slice_cols(qkv, d, d), {t, h, dh}), 1, 0, 2);
        Var v = nn::permute3(nn::reshape(nn::slice_cols(qkv, 2 * d, d), {t, h, dh}), 1, 0, 2);
        Var scores = nn::scale(nn::bmm(q, k, false, true),
                               1.0f / std::sqrt(static_cast<float>(dh)));
        scores = nn::add(scores, mask_v);
        Var probs = nn::reshape(nn::softmax_rows(nn::reshape(scores, {h * t, t})), {h, t, t});
        Var ctx = nn::reshape(nn::permute3(nn::bmm(probs, v, false, false), 1, 0, 2), {t, d});
        x = nn::add(x, nn::apply_linear(bp, layer.attn_out, ctx));
        Var h2 = nn::layer_norm_rows(x, bp[layer.ln2_g], bp[layer.ln2_b]);
        x = nn::add(x, nn::apply_linear(bp, layer.ff2,
                                        nn::relu(nn::apply_linear(bp, layer.ff1, h2))));
    }
    Var xf = nn::layer_norm_rows(x, bp[lnf_g_], bp[lnf_b_]);
    return nn::apply_linear(bp, head_, xf);
}

std::vector<std::string> PlannerModel::decode_texts(const std::string& high_level,
                                                    std::uint64_t seed) const {
    std::vector<int> ids = vocab_.tokenize(high_level);
    ids.push_back(vocab_.sep());
    const std::size_t prompt_len = ids.size();
    Rng rng(Rng::mix(cfg_.seed, Rng::mix(Rng::hash_str(high_level), seed)));

    nn::Bound bp = nn::bind(params_, false);
    while (static_cast<int>(ids.size()) < cfg_.max_seq) {
        Var logits = forward(bp, ids);
        const int t = static_cast<int>(ids.size());
        const float* row = logits->value.ptr() + static_cast<std::size_t>(t - 1) * vocab_.size();
        int next = 0;
        if (!cfg_.sampled) {
            for (int i = 1; i < vocab_.size(); ++i) {
                if (row[i] > row[next]) next = i;
            }
        } else {
            const float temp = std::max(1e-3f, cfg_.temperature);
            std::vector<double> p(static_cast<std::size_t>(vocab_.size()));
            double mx = row[0];
            for (int i = 1; i < vocab_.size(); ++i) mx = std::max<double>(mx, row[i]);
            double z = 0.0;
            for (int i = 0; i < vocab_.size(); ++i) {
                p[static_cast<std::size_t>(i)] = std::exp((row[i] - mx) / temp);
                z += p[static_cast<std::size_t>(i)];
            }
            double u = rng.uniform() * z;
            for (int i = 0; i < vocab_.size(); ++i) {
                u -= p[static_cast<std::size_t>(i)];
                if (u <= 0.0) {
                    next = i;
                    break;
                }
                next = i;
            }
        }
        ids.push_back(next);
        if (next == vocab_.eos()) break;
    }

    // Cut the generated region into [CSEP]-separated segments.
    std::vector<std::string> segments;
    std::vector<int> cur;
    for (std::size_t i = prompt_len; i < ids.size(); ++i) {
        if (ids[i] == vocab_.csep() || ids[i] == vocab_.eos() || ids[i] == vocab_.sep()) {
            segments.push_back(vocab_.detokenize(cur));
            cur.clear();
            if (ids[i] == vocab_.eos()) return segments;
        } else {
            cur.push_back(ids[i]);
        }
    }
    if (!cur.empty()) segments.push_back(vocab_.detokenize(cur));
    return segments;  // ran out of context without [EOS]
}

void PlannerModel::save(const std::string& path) const {
    nlohmann::ordered_json meta{
        {"format_version", kPlannerFormatVersion},
        {"kind", "planner"},
        {"vocabulary", vocab_.token_list()},
        {"hyperparameters",
         {{"d_model", cfg_.d_model},
          {"n_layers", cfg_.n_layers},
          {"n_heads", cfg_.n_heads},
          {"d_ff", cfg_.d_ff},
          {"max_seq", cfg_.max_seq},
          {"epochs", cfg_.epochs},
          {"batch", cfg_.batch},
          {"lr", cfg_.lr},
          {"seed", cfg_.seed},
          {"sampled", cfg_.sampled},
          {"temperature", cfg_.temperature}}}};
    nn::save_container(path, meta.dump(), params_);
}

PlannerModel PlannerModel::load(const std::string& path) {
    nn::Container c = nn::load_container(path);
    nlohmann::json meta = nlohmann::json::parse(c.meta_json);
    if (meta.at("format_version").get<int>() != kPlannerFormatVersion ||
        meta.at("kind").get<std::string>() != "planner") {
        throw VersionMismatch(path + " is not a planner checkpoint");
    }
    PlannerConfig cfg;
    const auto& h = meta.at("hyperparameters");
    cfg.d_model = h.at("d_model").get<int>();
    cfg.n_layers = h.at("n_layers").get<int>();
    cfg.n_heads = h.at("n_heads").get<int>();
    cfg.d_ff = h.at("d_ff").get<int>();
    cfg.max_seq = h.at("max_seq").get<int>();
    cfg.epochs = h.at("epochs").get<int>();
    cfg.batch = h.at("batch").get<int>();
    cfg.lr = h.at("lr").get<float>();
    cfg.seed = h.at("seed").get<std::uint64_t>();
    cfg.sampled = h.at("sampled").get<bool>();
    cfg.temperature = h.at("temperature").get<float>();
    PlannerModel model(cfg);
    if (meta.at("vocabulary").get<std::vector<std::string>>() != model.vocab_.token_list()) {
        throw VersionMismatch("planner vocabulary changed since " + path + " was written");
    }
    for (std::size_t i = 0; i < model.params_.count(); ++i) {
        const int j = c.params.find(model.params_.names[i]);
        if (j < 0) throw CorruptDataset("planner checkpoint missing " + model.params_.names[i]);
        if (!c.params.at(j).same_shape(model.params_.at(static_cast<int>(i)))) {
            throw VersionMismatch("planner parameter shape changed: " + model.params_.names[i]);
        }
        model.params_.at(static_cast<int>(i)) = c.params.at(j);
    }
    return model;
}

std::pair<PlannerModel, TrainTrace> train_planner(
    const std::vector<std::pair<std::string, core::Plan>>& pairs, const PlannerConfig& cfg,
    int workers) {
    if (pairs.empty()) throw ConfigError("train_planner: empty dataset");
    if (cfg.epochs <= 0 || cfg.batch <= 0 || cfg.lr <= 0.0f) {
        throw ConfigError("train_planner: degenerate hyperparameters");
    }
    PlannerModel model(cfg);
    std::vector<std::vector<int>> sequences;
    sequences.reserve(pairs.size());
    for (const auto& [task, p] : pairs) {
        sequences.push_back(serialize_example(task, p, model.vocab()));
    }

    nn::Adam opt(cfg.lr);
    Rng rng(Rng::mix(cfg.seed, 0x747261696eULL));
    TrainTrace trace;
    std::vector<int> order(sequences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        int epoch_items = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
            const int n = static_cast<int>(
                std::min<std::size_t>(cfg.batch, order.size() - start));
            auto bg = nn::compute_grads(
                model.params(), n, workers, [&](const nn::Bound& bp, int lo, int hi) {
                    std::vector<nn::Var> losses;
                    for (int i = lo; i < hi; ++i) {
                        const auto& ids = sequences[static_cast<std::size_t>(
                            order[start + static_cast<std::size_t>(i)])];
                        nn::Var logits = model.forward(bp, ids);
                        const int t = static_cast<int>(ids.size());
                        nn::Var pred = nn::slice_rows(logits, 0, t - 1);
                        std::vector<int> targets(ids.begin() + 1, ids.end());
                        std::vector<float> w(targets.size(), 1.0f);
                        losses.push_back(nn::cross_entropy_logits(pred, targets, w));
                    }
                    nn::Var sum = losses[0];
                    for (std::size_t i = 1; i < losses.size(); ++i) {
                        sum = nn::add(sum, losses[i]);
                    }
                    return sum;
                });
            nn::scale_grads(bg.grads, 1.0f / static_cast<float>(n));
            nn::clip_grads(bg.grads, cfg.grad_clip);
            opt.step(model.params(), bg.grads);
            epoch_loss += bg.loss_sum;
            epoch_items += n;
        }
        trace.epoch_loss.push_back(epoch_loss / epoch_items);
    }
    return {std::move(model), std::move(trace)};
}

core::Plan plan(const PlannerModel& model, const std::string& high_level, std::uint64_t seed) {
    core::parse_high_level(high_level);  // precondition: task template
    const std::vector<std::string> segments = model.decode_texts(high_level, seed);
    if (segments.size() != 4) {
        throw DecodeError("planner produced " + std::to_string(segments.size()) +
                          " segments, expected 4");
    }
    core::Plan p;
    for (const std::string& s : segments) {
        try {
            p.instructions.push_back(core::parse_instruction(s));
        } catch (const ParseError& e) {
            throw DecodeError("planner segment \"" + s + "\" does not parse: " + e.what());
        }
    }
    return p;
}

}  // namespace spp::planner
