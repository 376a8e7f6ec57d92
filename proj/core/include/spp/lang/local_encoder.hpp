#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spp/core/domain.hpp"
#include "spp/nn/layers.hpp"

namespace spp::lang {

struct LocalEncoderConfig {
    int d_tok = 48;
    int d_hidden = 96;
    int d_emb = 512;
    int max_len = 16;
    // training
    int steps = 1500;
    int batch_triplets = 32;
    float lr = 2e-3f;
    float margin = 0.3f;
    std::uint64_t seed = 1;

    bool operator==(const LocalEncoderConfig&) const = default;
};

/// Compositional text encoder. Single letters are represented by their
/// rendered glyph bitmaps (so any letter, seen in training or not, has a
/// defined and shape-aware embedding); other template words get learned
/// rows. Mean-pooled with positional embeddings, then a small MLP.
class LocalTextEncoder {
public:
    LocalTextEncoder(LocalEncoderConfig cfg, const std::vector<std::string>& word_vocab,
                     std::uint64_t seed);

    const LocalEncoderConfig& config() const { return cfg_; }
    const std::vector<std::string>& vocab() const { return vocab_; }
    nn::Params& params() { return params_; }
    const nn::Params& params() const { return params_; }

    /// Plain evaluation; total over any text (unknown non-letter words map
    /// to a shared fallback row).
    std::vector<float> embed(const std::string& text) const;

    /// Graph form for training.
    nn::Var embed_graph(const nn::Bound& bp, const std::string& text) const;

    void save(const std::string& path) const;
    static LocalTextEncoder load(const std::string& path);

private:
    struct Token {
        bool is_letter;
        core::Letter letter;
        int vocab_id;  // when !is_letter
    };
    std::vector<Token> tokenize(const std::string& text) const;

    LocalEncoderConfig cfg_;
    std::vector<std::string> vocab_;
    nn::Params params_;
    int tok_emb_ = -1;   // [vocab+1, d_tok]; last row is the fallback
    int pos_emb_ = -1;   // [max_len, d_tok]
    nn::LinearSpec glyph_proj_;  // 64 -> d_tok
    nn::LinearSpec fc1_, fc2_;
};

struct TripletStats {
    double satisfied_rate = 0.0;  // cos(a,p) > cos(a,n) on sampled triplets
    int n_triplets = 0;
};

/// Trains the encoder contrastively so instructions sharing constituents
/// embed closer than those sharing none. Returns the encoder plus the
/// triplet satisfaction rate on freshly sampled triplets.
std::pair<std::shared_ptr<LocalTextEncoder>, TripletStats> train_local_embeddings(
    const std::vector<std::string>& label_corpus, const LocalEncoderConfig& cfg, int workers);

/// Constituent extraction shared by triplet sampling and tests: colors,
/// letters and relation words of an instruction, or the letters of a
/// high-level task string.
std::vector<std::string> constituents_of(const std::string& text);

}  // namespace spp::lang
