#include "spp/lang/local_encoder.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>

#include "spp/core/grammar.hpp"
#include "spp/datagen/font.hpp"
#include "spp/nn/adam.hpp"

namespace spp::lang {

namespace {

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

LocalTextEncoder::LocalTextEncoder(LocalEncoderConfig cfg,
                                   const std::vector<std::string>& word_vocab, std::uint64_t seed)
    : cfg_(cfg), vocab_(word_vocab) {
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    Rng rng(seed);
    tok_emb_ = params_.add("tok_emb", nn::Tensor::randn(
                                          {static_cast<int>(vocab_.size()) + 1, cfg_.d_tok},
                                          rng, 0.1f));
    pos_emb_ = params_.add("pos_emb", nn::Tensor::randn({cfg_.max_len, cfg_.d_tok}, rng, 0.05f));
    glyph_proj_ = nn::add_linear(params_, "glyph_proj", cfg_.d_tok, 64, rng);
    fc1_ = nn::add_linear(params_, "fc1", cfg_.d_hidden, cfg_.d_tok, rng);
    fc2_ = nn::add_linear(params_, "fc2", cfg_.d_emb, cfg_.d_hidden, rng);
}

std::vector<LocalTextEncoder::Token> LocalTextEncoder::tokenize(const std::string& text) const {
    std::vector<Token> tokens;
    for (const std::string& w : split_words(text)) {
        // High-level task words arrive glued ("MATE"): split multi-letter
        // all-caps words into letter tokens.
        const bool all_upper = std::all_of(w.begin(), w.end(), [](char c) {
            return c >= 'A' && c <= 'Z';
        });
        if (all_upper) {
            for (char c : w) tokens.push_back({true, *core::letter_from_char(c), 0});
            continue;
        }
        const std::string lw = lower(w);
        const auto it = std::lower_bound(vocab_.begin(), vocab_.end(), lw);
        const int id = (it != vocab_.end() && *it == lw)
                           ? static_cast<int>(it - vocab_.begin())
                           : static_cast<int>(vocab_.size());  // fallback row
        tokens.push_back({false, core::Letter::A, id});
    }
    if (tokens.size() > static_cast<std::size_t>(cfg_.max_len)) {
        tokens.resize(static_cast<std::size_t>(cfg_.max_len));
    }
    return tokens;
}

nn::Var LocalTextEncoder::embed_graph(const nn::Bound& bp, const std::string& text) const {
    const auto tokens = tokenize(text);
    const int t = std::max<int>(1, static_cast<int>(tokens.size()));

    // Letter tokens go through the glyph projection; word tokens come from
    // the embedding table. Assemble per-position rows then mean-pool.
    std::vector<nn::Var> rows;
    std::vector<int> positions;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        positions.push_back(static_cast<int>(i));
        if (tokens[i].is_letter) {
            const auto& bitmap = datagen::Font8x8::glyph(tokens[i].letter);
            nn::Tensor g({1, 64});
            std::copy(bitmap.begin(), bitmap.end(), g.data.begin());
            rows.push_back(nn::apply_linear(bp, glyph_proj_, nn::leaf(std::move(g))));
        } else {
            rows.push_back(nn::embedding_lookup(bp[tok_emb_], {tokens[i].vocab_id}));
        }
    }
    nn::Var x = tokens.empty() ? nn::leaf(nn::Tensor::zeros({1, cfg_.d_tok}))
                               : nn::concat_rows(rows);
    if (!tokens.empty()) {
        x = nn::add(x, nn::embedding_lookup(bp[pos_emb_], positions));
    }
    // mean over positions: [T,D] -> [1,D]
    nn::Tensor ones({1, t});
    std::fill(ones.data.begin(), ones.data.end(), 1.0f / static_cast<float>(t));
    nn::Var pooled = nn::matmul(nn::leaf(std::move(ones)), x);
    return nn::apply_linear(bp, fc2_, nn::relu(nn::apply_linear(bp, fc1_, pooled)));
}

std::vector<float> LocalTextEncoder::embed(const std::string& text) const {
    nn::Bound bp = nn::bind(params_, false);
    nn::Var e = embed_graph(bp, text);
    return e->value.data;
}

void LocalTextEncoder::save(const std::string& path) const {
    nlohmann::ordered_json meta{{"format_version", 1},
                                {"kind", "local_text_encoder"},
                                {"config",
                                 {{"d_tok", cfg_.d_tok},
                                  {"d_hidden", cfg_.d_hidden},
                                  {"d_emb", cfg_.d_emb},
                                  {"max_len", cfg_.max_len}}},
                                {"vocab", vocab_}};
    nn::save_container(path, meta.dump(), params_);
}

LocalTextEncoder LocalTextEncoder::load(const std::string& path) {
    nn::Container c = nn::load_container(path);
    nlohmann::json meta = nlohmann::json::parse(c.meta_json);
    if (meta.at("format_version").get<int>() != 1 ||
        meta.at("kind").get<std::string>() != "local_text_encoder") {
        throw VersionMismatch(path + " is not a local_text_encoder checkpoint");
    }
    LocalEncoderConfig cfg;
    cfg.d_tok = meta.at("config").at("d_tok").get<int>();
    cfg.d_hidden = meta.at("config").at("d_hidden").get<int>();
    cfg.d_emb = meta.at("config").at("d_emb").get<int>();
    cfg.max_len = meta.at("config").at("max_len").get<int>();
    LocalTextEncoder enc(cfg, meta.at("vocab").get<std::vector<std::string>>(), 0);
    for (std::size_t i = 0; i < enc.params_.count(); ++i) {
        const int j = c.params.find(enc.params_.names[i]);
        if (j < 0) throw CorruptDataset("encoder checkpoint missing " + enc.params_.names[i]);
        if (!c.params.at(j).same_shape(enc.params_.at(static_cast<int>(i)))) {
            throw VersionMismatch("encoder parameter shape changed: " + enc.params_.names[i]);
        }
        enc.params_.at(static_cast<int>(i)) = c.params.at(j);
    }
    return enc;
}

std::vector<std::string> constituents_of(const std::string& text) {
    std::vector<std::string> out;
    try {
        const core::Instruction instr = core::parse_instruction(text);
        out.push_back(core::to_string(instr.object.color));
        out.push_back(std::string(1, core::to_char(instr.object.letter)));
        if (const auto* q = std::get_if<core::QuarterTarget>(&instr.target)) {
            out.push_back(core::quarter_name(q->quarter));
        } else {
            const auto& rel = std::get<core::RelativeTarget>(instr.target);
            out.push_back(core::to_string(rel.side));
            out.push_back(core::to_string(rel.reference.color));
            out.push_back(std::string(1, core::to_char(rel.reference.letter)));
        }
        return out;
    } catch (const ParseError&) {
    }
    try {
        const std::string word = core::parse_high_level(text);
        for (char c : word) out.push_back(std::string(1, c));
    } catch (const ParseError&) {
    }
    return out;
}

namespace {

bool share_constituent(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    }
    return false;
}

nn::Var cosine(const nn::Var& a, const nn::Var& b) {
    nn::Var dot = nn::sum_all(nn::mul(a, b));
    nn::Var na = nn::add_scalar(nn::sum_all(nn::square(a)), 1e-8f);
    nn::Var nb = nn::add_scalar(nn::sum_all(nn::square(b)), 1e-8f);
    nn::Var inv_norm = nn::exp_act(nn::scale(nn::add(nn::log_act(na), nn::log_act(nb)), -0.5f));
    return nn::mul(dot, inv_norm);
}

}  // namespace

std::pair<std::shared_ptr<LocalTextEncoder>, TripletStats> train_local_embeddings(
    const std::vector<std::string>& label_corpus, const LocalEncoderConfig& cfg, int workers) {
    if (label_corpus.empty()) throw ConfigError("train_local_embeddings: empty corpus");
    if (cfg.steps <= 0 || cfg.batch_triplets <= 0 || cfg.lr <= 0.0f) {
        throw ConfigError("train_local_embeddings: degenerate hyperparameters");
    }

    // Word vocabulary: every non-all-caps word in the corpus.
    std::set<std::string> vocab;
    for (const std::string& text : label_corpus) {
        for (const std::string& w : split_words(text)) {
            const bool all_upper = std::all_of(w.begin(), w.end(), [](char c) {
                return c >= 'A' && c <= 'Z';
            });
            if (!all_upper) vocab.insert(lower(w));
        }
    }
    auto enc = std::make_shared<LocalTextEncoder>(
        cfg, std::vector<std::string>(vocab.begin(), vocab.end()), cfg.seed);

    std::vector<std::vector<std::string>> consts;
    consts.reserve(label_corpus.size());
    for (const auto& text : label_corpus) consts.push_back(constituents_of(text));

    Rng rng(Rng::mix(cfg.seed, 0x656d62ULL));
    auto sample_triplet = [&](Rng& r) -> std::array<int, 3> {
        for (int tries = 0; tries < 64; ++tries) {
            const int a = static_cast<int>(r.uniform_int(label_corpus.size()));
            const int p = static_cast<int>(r.uniform_int(label_corpus.size()));
            const int n = static_cast<int>(r.uniform_int(label_corpus.size()));
            if (a == p || consts[a].empty()) continue;
            if (!share_constituent(consts[a], consts[p])) continue;
            if (share_constituent(consts[a], consts[n])) continue;
            return {a, p, n};
        }
        return {-1, -1, -1};
    };

    nn::Adam opt(cfg.lr);
    for (int step = 0; step < cfg.steps; ++step) {
        std::vector<std::array<int, 3>> batch;
        for (int i = 0; i < cfg.batch_triplets; ++i) {
            auto t = sample_triplet(rng);
            if (t[0] >= 0) batch.push_back(t);
        }
        if (batch.empty()) continue;
        auto bg = nn::compute_grads(
            enc->params(), static_cast<int>(batch.size()), workers,
            [&](const nn::Bound& bp, int lo, int hi) {
                std::vector<nn::Var> losses;
                for (int i = lo; i < hi; ++i) {
                    nn::Var a = enc->embed_graph(bp, label_corpus[batch[i][0]]);
                    nn::Var p = enc->embed_graph(bp, label_corpus[batch[i][1]]);
                    nn::Var n = enc->embed_graph(bp, label_corpus[batch[i][2]]);
                    nn::Var l = nn::relu(nn::add_scalar(
                        nn::sub(cosine(a, n), cosine(a, p)), cfg.margin));
                    losses.push_back(l);
                }
                nn::Var sum = losses[0];
                for (std::size_t i = 1; i < losses.size(); ++i) sum = nn::add(sum, losses[i]);
                return sum;
            });
        nn::scale_grads(bg.grads, 1.0f / static_cast<float>(batch.size()));
        opt.step(enc->params(), bg.grads);
    }

    // Satisfaction rate on fresh triplets.
    TripletStats stats;
    Rng eval_rng(Rng::mix(cfg.seed, 0x7472ULL));
    int ok = 0;
    const int n_eval = 200;
    for (int i = 0; i < n_eval; ++i) {
        const auto t = sample_triplet(eval_rng);
        if (t[0] < 0) continue;
        const auto a = enc->embed(label_corpus[t[0]]);
        const auto p = enc->embed(label_corpus[t[1]]);
        const auto n = enc->embed(label_corpus[t[2]]);
        auto cos = [](const std::vector<float>& x, const std::vector<float>& y) {
            double d = 0.0, nx = 1e-12, ny = 1e-12;
            for (std::size_t j = 0; j < x.size(); ++j) {
                d += static_cast<double>(x[j]) * y[j];
                nx += static_cast<double>(x[j]) * x[j];
                ny += static_cast<double>(y[j]) * y[j];
            }
            return d / std::sqrt(nx * ny);
        };
        ++stats.n_triplets;
        if (cos(a, p) > cos(a, n)) ++ok;
    }
    stats.satisfied_rate = stats.n_triplets ? static_cast<double>(ok) / stats.n_triplets : 0.0;
    return {enc, stats};
}

}  // namespace spp::lang
