#include "spp/lang/gate.hpp"

#include <cmath>

namespace spp::lang {

GateParams GateParams::init(int d_gate, int d_emb, Rng& rng) {
    GateParams p;
    p.w = nn::Tensor::xavier(d_gate, d_emb, rng);
    p.b = nn::Tensor::zeros({d_gate});
    return p;
}

std::vector<float> gate_from_embedding(const std::vector<float>& emb, const GateParams& params) {
    if (static_cast<int>(emb.size()) != params.d_emb()) {
        throw DimensionMismatch("gate_from_embedding: embedding dim " +
                                std::to_string(emb.size()) + " != " +
                                std::to_string(params.d_emb()));
    }
    std::vector<float> out(static_cast<std::size_t>(params.d_gate()));
    for (int i = 0; i < params.d_gate(); ++i) {
        float z = params.b.data[static_cast<std::size_t>(i)];
        const float* row = params.w.ptr() + static_cast<std::size_t>(i) * params.d_emb();
        for (int j = 0; j < params.d_emb(); ++j) z += row[j] * emb[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = 1.0f / (1.0f + std::exp(-z));
    }
    return out;
}

nn::Var gate_graph(const nn::Var& emb_rows, const nn::Var& w, const nn::Var& b) {
    return nn::sigmoid(nn::linear(emb_rows, w, b));
}

}  // namespace spp::lang
