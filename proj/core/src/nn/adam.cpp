#include "spp/nn/adam.hpp"

#include <cmath>

namespace spp::nn {

void Adam::step(Params& params, const std::vector<Tensor>& grads) {
    if (grads.size() != params.count()) throw ShapeMismatch("adam: grad/param count mismatch");
    if (m_.empty()) {
        for (const auto& p : params.values) {
            m_.push_back(Tensor::zeros(p.shape));
            v_.push_back(Tensor::zeros(p.shape));
        }
    }
    ++t_;
    const float bc1 = 1.0f - std::pow(beta1_, static_cast<float>(t_));
    const float bc2 = 1.0f - std::pow(beta2_, static_cast<float>(t_));
    for (std::size_t i = 0; i < params.count(); ++i) {
        float* p = params.values[i].ptr();
        const float* g = grads[i].ptr();
        float* m = m_[i].ptr();
        float* v = v_[i].ptr();
        const std::size_t n = params.values[i].numel();
        for (std::size_t j = 0; j < n; ++j) {
            m[j] = beta1_ * m[j] + (1.0f - beta1_) * g[j];
            v[j] = beta2_ * v[j] + (1.0f - beta2_) * g[j] * g[j];
            const float mh = m[j] / bc1;
            const float vh = v[j] / bc2;
            p[j] -= lr_ * mh / (std::sqrt(vh) + eps_);
        }
    }
}

}  // namespace spp::nn
