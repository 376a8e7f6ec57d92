#pragma once

#include "spp/nn/params.hpp"

namespace spp::nn {

/// Adam with bias correction.
class Adam {
public:
    explicit Adam(float lr, float beta1 = 0.9f, float beta2 = 0.999f, float eps = 1e-8f)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(Params& params, const std::vector<Tensor>& grads);

    float lr() const { return lr_; }
    void set_lr(float lr) { lr_ = lr; }
    int t() const { return t_; }

    /// Moment tensors for checkpointing (aligned with the Params order).
    std::vector<Tensor>& m() { return m_; }
    std::vector<Tensor>& v() { return v_; }
    void set_t(int t) { t_ = t; }

private:
    float lr_, beta1_, beta2_, eps_;
    int t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace spp::nn
