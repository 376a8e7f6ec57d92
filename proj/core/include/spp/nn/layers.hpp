#pragma once

#include <functional>
#include <thread>
#include <utility>

#include "spp/nn/adam.hpp"
#include "spp/nn/autodiff.hpp"
#include "spp/nn/params.hpp"

namespace spp::nn {

struct LinearSpec {
    int w = -1;
    int b = -1;
};

inline LinearSpec add_linear(Params& p, const std::string& name, int out, int in, Rng& rng) {
    LinearSpec s;
    s.w = p.add(name + ".w", Tensor::xavier(out, in, rng));
    s.b = p.add(name + ".b", Tensor::zeros({out}));
    return s;
}

inline Var apply_linear(const Bound& bp, const LinearSpec& s, const Var& x) {
    return linear(x, bp[s.w], bp[s.b]);
}

struct LstmSpec {
    int w = -1;  // [4H, in+H]
    int b = -1;  // [4H], forget-gate block initialized to 1
    int in_dim = 0;
    int hidden = 0;
};

inline LstmSpec add_lstm(Params& p, const std::string& name, int in_dim, int hidden, Rng& rng) {
    LstmSpec s;
    s.in_dim = in_dim;
    s.hidden = hidden;
    s.w = p.add(name + ".w", Tensor::xavier(4 * hidden, in_dim + hidden, rng));
    Tensor bias = Tensor::zeros({4 * hidden});
    for (int i = hidden; i < 2 * hidden; ++i) bias.data[i] = 1.0f;
    s.b = p.add(name + ".b", std::move(bias));
    return s;
}

struct LstmState {
    Var h;
    Var c;
};

inline LstmState lstm_zero_state(const LstmSpec& s, int batch) {
    return {leaf(Tensor::zeros({batch, s.hidden})), leaf(Tensor::zeros({batch, s.hidden}))};
}

/// One LSTM step over a [N, in_dim] input; gate order i, f, g, o.
inline std::pair<Var, LstmState> lstm_step(const Bound& bp, const LstmSpec& s, const Var& x,
                                           const LstmState& prev) {
    Var xh = concat_cols({x, prev.h});
    Var gates = linear(xh, bp[s.w], bp[s.b]);
    const int h = s.hidden;
    Var i = sigmoid(slice_cols(gates, 0, h));
    Var f = sigmoid(slice_cols(gates, h, h));
    Var g = tanh_act(slice_cols(gates, 2 * h, h));
    Var o = sigmoid(slice_cols(gates, 3 * h, h));
    Var c = add(mul(f, prev.c), mul(i, g));
    Var hy = mul(o, tanh_act(c));
    return {hy, LstmState{hy, c}};
}

// ---------------------------------------------------------------------------
// Data-parallel gradient computation.
//
// Items [begin, end) are split into fixed contiguous chunks, one worker per
// chunk; each worker binds its own copy of the parameters and differentiates
// an independent graph. Reduction runs in chunk order, so the result does not
// depend on thread scheduling.

struct BatchGrads {
    double loss_sum = 0.0;  // sum over items of per-item loss
    std::vector<Tensor> grads;
};

/// build_loss(bound, lo, hi) must return the SUM of per-item losses over
/// [lo, hi). The caller divides by the item count afterwards.
inline BatchGrads compute_grads(
    const Params& params, int n_items, int workers,
    const std::function<Var(const Bound&, int, int)>& build_loss) {
    workers = std::max(1, std::min(workers, n_items));
    std::vector<int> cuts(static_cast<std::size_t>(workers) + 1);
    for (int w = 0; w <= workers; ++w) {
        cuts[w] = static_cast<int>(static_cast<long long>(n_items) * w / workers);
    }
    std::vector<BatchGrads> partial(static_cast<std::size_t>(workers));
    auto run = [&](int w) {
        Bound bp = bind(params, true);
        Var loss = build_loss(bp, cuts[w], cuts[w + 1]);
        backward(loss);
        partial[w].loss_sum = loss->value.data[0];
        partial[w].grads = grads_of(params, bp);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& t : threads) t.join();
    }
    BatchGrads total;
    for (int w = 0; w < workers; ++w) {
        total.loss_sum += partial[w].loss_sum;
        accumulate(total.grads, partial[w].grads);
    }
    return total;
}

}  // namespace spp::nn
