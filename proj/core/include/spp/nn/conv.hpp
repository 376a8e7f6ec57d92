#pragma once

#include "spp/nn/autodiff.hpp"

namespace spp::nn {

/// 2-D convolution: x [N,C,H,W], w [O,C,kh,kw], b [O]. Zero padding.
Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad);

/// 2-D transposed convolution (the adjoint map): x [N,C,H,W], w [C,O,kh,kw],
/// b [O]. Output spatial size (H-1)*stride - 2*pad + kh.
Var conv_transpose2d(const Var& x, const Var& w, const Var& b, int stride, int pad);

}  // namespace spp::nn
