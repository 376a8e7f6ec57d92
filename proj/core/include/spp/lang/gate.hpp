#pragma once

#include <vector>

#include "spp/nn/autodiff.hpp"

namespace spp::lang {

/// Learned projection + sigmoid that turns a text embedding into per-slot
/// activation probabilities in (0,1).
struct GateParams {
    nn::Tensor w;  // [d_gate, d_emb]
    nn::Tensor b;  // [d_gate]

    int d_gate() const { return w.dim(0); }
    int d_emb() const { return w.dim(1); }

    static GateParams init(int d_gate, int d_emb, Rng& rng);
};

/// sigmoid(W e + b), elementwise; DimensionMismatch when shapes disagree.
std::vector<float> gate_from_embedding(const std::vector<float>& emb, const GateParams& params);

/// Graph form of the same map, for training and gradient checks.
nn::Var gate_graph(const nn::Var& emb_rows, const nn::Var& w, const nn::Var& b);

}  // namespace spp::lang
