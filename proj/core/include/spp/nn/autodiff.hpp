#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "spp/nn/tensor.hpp"

namespace spp::nn {

/// One node of a reverse-mode tape. Graphs are built per forward pass and
/// are thread-local by construction: nothing here is shared, so independent
/// workers may build and differentiate graphs concurrently.
struct Node {
    Tensor value;
    Tensor grad;  // allocated lazily, same shape as value
    bool requires_grad = false;
    std::uint64_t seq = 0;  // creation order; parents always precede children
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;  // accumulates node.grad into parents

    void ensure_grad() {
        if (grad.empty()) grad = Tensor::zeros(value.shape);
    }
};

using Var = std::shared_ptr<Node>;

/// Leaf node. requires_grad marks trainable parameters.
Var leaf(Tensor value, bool requires_grad = false);

/// Internal: allocates a node downstream of `parents`.
Var make_node(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop);

/// Runs reverse-mode accumulation from a scalar loss. Gradients land in the
/// `grad` tensors of reachable nodes with requires_grad set.
void backward(const Var& loss);

// ---------------------------------------------------------------------------
// Elementwise / shape ops

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, float s);
Var add_scalar(const Var& a, float s);
Var neg(const Var& a);

Var sigmoid(const Var& a);
Var tanh_act(const Var& a);
Var relu(const Var& a);
Var leaky_relu(const Var& a, float slope);
Var exp_act(const Var& a);
Var log_act(const Var& a);  // input must be positive
Var square(const Var& a);
Var clamp(const Var& a, float lo, float hi);  // zero gradient outside [lo, hi]

Var reshape(const Var& a, std::vector<int> shape);
Var concat_cols(const std::vector<Var>& xs);            // [N,Di] -> [N, sum Di]
Var slice_cols(const Var& a, int start, int len);       // [N,D] -> [N,len]
Var concat_rows(const std::vector<Var>& xs);            // [Ni,D] -> [sum Ni, D]
Var slice_rows(const Var& a, int start, int len);
Var permute3(const Var& a, int p0, int p1, int p2);     // rank-3 transpose

// ---------------------------------------------------------------------------
// Reductions / losses

Var sum_all(const Var& a);   // -> [1]
Var mean_all(const Var& a);  // -> [1]

/// Mean squared error over all elements -> [1].
Var mse_loss(const Var& pred, const Var& target);

/// Row-wise softmax over the last dim of a [N,D] tensor.
Var softmax_rows(const Var& a);

/// Cross entropy from logits [N,V] against integer targets, weighted per row
/// (weight 0 masks a row out). Returns [1]: sum_i w_i * ce_i / sum_i w_i.
Var cross_entropy_logits(const Var& logits, const std::vector<int>& targets,
                         const std::vector<float>& weights);

// ---------------------------------------------------------------------------
// Linear algebra

/// [M,K] x [K,N] -> [M,N]
Var matmul(const Var& a, const Var& b);
/// x [N,K] * W^T with W [O,K], plus bias [O] -> [N,O]
Var linear(const Var& x, const Var& w, const Var& b);
/// Batched matmul on rank-3 tensors with optional transposes:
/// a [B,M,K] (or [B,K,M] if trans_a), b [B,K,N] (or [B,N,K] if trans_b).
Var bmm(const Var& a, const Var& b, bool trans_a, bool trans_b);

/// Row gather from an embedding matrix [V,D] -> [T,D]; scatter-add on backward.
Var embedding_lookup(const Var& table, const std::vector<int>& ids);

/// Per-row normalization of [N,D]: (x - mean)/sqrt(var+eps) * gamma + beta,
/// statistics over D. gamma/beta are [D].
Var layer_norm_rows(const Var& x, const Var& gamma, const Var& beta, float eps = 1e-5f);

/// Per-(sample, channel) normalization of [N,C,H,W] over the spatial dims.
/// gamma/beta are [C]. Deterministic at any batch size.
Var channel_norm(const Var& x, const Var& gamma, const Var& beta, float eps = 1e-5f);

}  // namespace spp::nn
