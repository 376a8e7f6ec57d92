#include "spp/nn/conv.hpp"

#include <Eigen/Dense>

namespace spp::nn {

namespace {

using EMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

/// im2col for one sample: src [C,H,W] -> dst [C*kh*kw, OH*OW].
void im2col(const float* src, int c, int h, int w, int kh, int kw, int stride, int pad, int oh,
            int ow, float* dst) {
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    const std::size_t ocols = static_cast<std::size_t>(oh) * ow;
    for (int ci = 0; ci < c; ++ci) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                float* row = dst + ((static_cast<std::size_t>(ci) * kh + ki) * kw + kj) * ocols;
                for (int i = 0; i < oh; ++i) {
                    const int y = i * stride - pad + ki;
                    if (y < 0 || y >= h) {
                        std::fill_n(row + static_cast<std::size_t>(i) * ow, ow, 0.0f);
                        continue;
                    }
                    const float* srow = src + ci * plane + static_cast<std::size_t>(y) * w;
                    float* drow = row + static_cast<std::size_t>(i) * ow;
                    for (int j = 0; j < ow; ++j) {
                        const int x = j * stride - pad + kj;
                        drow[j] = (x >= 0 && x < w) ? srow[x] : 0.0f;
                    }
                }
            }
        }
    }
}

/// Adjoint of im2col: scatter-adds cols [C*kh*kw, OH*OW] into dst [C,H,W].
void col2im_add(const float* cols, int c, int h, int w, int kh, int kw, int stride, int pad,
                int oh, int ow, float* dst) {
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    const std::size_t ocols = static_cast<std::size_t>(oh) * ow;
    for (int ci = 0; ci < c; ++ci) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                const float* row =
                    cols + ((static_cast<std::size_t>(ci) * kh + ki) * kw + kj) * ocols;
                for (int i = 0; i < oh; ++i) {
                    const int y = i * stride - pad + ki;
                    if (y < 0 || y >= h) continue;
                    float* drow = dst + ci * plane + static_cast<std::size_t>(y) * w;
                    const float* srow = row + static_cast<std::size_t>(i) * ow;
                    for (int j = 0; j < ow; ++j) {
                        const int x = j * stride - pad + kj;
                        if (x >= 0 && x < w) drow[x] += srow[j];
                    }
                }
            }
        }
    }
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad) {
    if (x->value.rank() != 4 || w->value.rank() != 4 || x->value.dim(1) != w->value.dim(1)) {
        throw ShapeMismatch("conv2d: x " + x->value.shape_str() + ", w " + w->value.shape_str());
    }
    const int n = x->value.dim(0);
    const int c = x->value.dim(1);
    const int h = x->value.dim(2);
    const int wd = x->value.dim(3);
    const int o = w->value.dim(0);
    const int kh = w->value.dim(2);
    const int kw = w->value.dim(3);
    const int oh = (h + 2 * pad - kh) / stride + 1;
    const int ow = (wd + 2 * pad - kw) / stride + 1;
    if (oh <= 0 || ow <= 0) throw ShapeMismatch("conv2d: empty output");
    const int ckk = c * kh * kw;
    const std::size_t ocols = static_cast<std::size_t>(oh) * ow;
    const std::size_t in_plane = static_cast<std::size_t>(c) * h * wd;
    const std::size_t out_plane = static_cast<std::size_t>(o) * ocols;

    // Columns are kept for the backward pass (recompute would cost a second
    // im2col; memory at these sizes is cheap).
    auto cols = std::make_shared<Tensor>(std::vector<int>{n, ckk, static_cast<int>(ocols)});
    Tensor out({n, o, oh, ow});
    CMap wmat(w->value.ptr(), o, ckk);
    for (int i = 0; i < n; ++i) {
        float* col_i = cols->ptr() + static_cast<std::size_t>(i) * ckk * ocols;
        im2col(x->value.ptr() + i * in_plane, c, h, wd, kh, kw, stride, pad, oh, ow, col_i);
        MMap(out.ptr() + i * out_plane, o, static_cast<int>(ocols)).noalias() =
            wmat * CMap(col_i, ckk, static_cast<int>(ocols));
    }
    for (int i = 0; i < n; ++i) {
        for (int ch = 0; ch < o; ++ch) {
            float* p = out.ptr() + i * out_plane + ch * ocols;
            const float bias = b->value.data[ch];
            for (std::size_t k = 0; k < ocols; ++k) p[k] += bias;
        }
    }
    return make_node(
        std::move(out), {x, w, b},
        [cols, n, c, h, wd, o, kh, kw, stride, pad, oh, ow, ckk, ocols, in_plane,
         out_plane](Node& node) {
            const Var& x = node.parents[0];
            const Var& w = node.parents[1];
            const Var& b = node.parents[2];
            if (b->requires_grad) {
                b->ensure_grad();
                for (int i = 0; i < n; ++i) {
                    for (int ch = 0; ch < o; ++ch) {
                        const float* g = node.grad.ptr() + i * out_plane + ch * ocols;
                        float s = 0.0f;
                        for (std::size_t k = 0; k < ocols; ++k) s += g[k];
                        b->grad.data[ch] += s;
                    }
                }
            }
            if (w->requires_grad) w->ensure_grad();
            if (x->requires_grad) x->ensure_grad();
            Tensor dcols({ckk, static_cast<int>(ocols)});
            for (int i = 0; i < n; ++i) {
                CMap g(node.grad.ptr() + i * out_plane, o, static_cast<int>(ocols));
                const float* col_i = cols->ptr() + static_cast<std::size_t>(i) * ckk * ocols;
                if (w->requires_grad) {
                    MMap(w->grad.ptr(), o, ckk).noalias() +=
                        g * CMap(col_i, ckk, static_cast<int>(ocols)).transpose();
                }
                if (x->requires_grad) {
                    MMap(dcols.ptr(), ckk, static_cast<int>(ocols)).noalias() =
                        CMap(w->value.ptr(), o, ckk).transpose() * g;
                    col2im_add(dcols.ptr(), c, h, wd, kh, kw, stride, pad, oh, ow,
                               x->grad.ptr() + i * in_plane);
                }
            }
        });
}

Var conv_transpose2d(const Var& x, const Var& w, const Var& b, int stride, int pad) {
    if (x->value.rank() != 4 || w->value.rank() != 4 || x->value.dim(1) != w->value.dim(0)) {
        throw ShapeMismatch("conv_transpose2d: x " + x->value.shape_str() + ", w " +
                            w->value.shape_str());
    }
    const int n = x->value.dim(0);
    const int c = x->value.dim(1);
    const int h = x->value.dim(2);
    const int wd = x->value.dim(3);
    const int o = w->value.dim(1);
    const int kh = w->value.dim(2);
    const int kw = w->value.dim(3);
    const int oh = (h - 1) * stride - 2 * pad + kh;
    const int ow = (wd - 1) * stride - 2 * pad + kw;
    if (oh <= 0 || ow <= 0) throw ShapeMismatch("conv_transpose2d: empty output");
    const int okk = o * kh * kw;
    const std::size_t icols = static_cast<std::size_t>(h) * wd;
    const std::size_t in_plane = static_cast<std::size_t>(c) * icols;
    const std::size_t out_plane = static_cast<std::size_t>(o) * oh * ow;

    Tensor out({n, o, oh, ow});
    Tensor cols({okk, static_cast<int>(icols)});
    // w viewed as [C, O*kh*kw]
    CMap wmat(w->value.ptr(), c, okk);
    for (int i = 0; i < n; ++i) {
        MMap(cols.ptr(), okk, static_cast<int>(icols)).noalias() =
            wmat.transpose() * CMap(x->value.ptr() + i * in_plane, c, static_cast<int>(icols));
        // Scatter with conv geometry where (h, wd) play the output-grid role.
        col2im_add(cols.ptr(), o, oh, ow, kh, kw, stride, pad, h, wd,
                   out.ptr() + i * out_plane);
    }
    for (int i = 0; i < n; ++i) {
        for (int ch = 0; ch < o; ++ch) {
            float* p = out.ptr() + i * out_plane + static_cast<std::size_t>(ch) * oh * ow;
            const float bias = b->value.data[ch];
            for (int k = 0; k < oh * ow; ++k) p[k] += bias;
        }
    }
    return make_node(
        std::move(out), {x, w, b},
        [n, c, h, wd, o, kh, kw, stride, pad, oh, ow, okk, icols, in_plane,
         out_plane](Node& node) {
            const Var& x = node.parents[0];
            const Var& w = node.parents[1];
            const Var& b = node.parents[2];
            if (b->requires_grad) {
                b->ensure_grad();
                for (int i = 0; i < n; ++i) {
                    for (int ch = 0; ch < o; ++ch) {
                        const float* g = node.grad.ptr() + i * out_plane +
                                         static_cast<std::size_t>(ch) * oh * ow;
                        float s = 0.0f;
                        for (int k = 0; k < oh * ow; ++k) s += g[k];
                        b->grad.data[ch] += s;
                    }
                }
            }
            if (w->requires_grad) w->ensure_grad();
            if (x->requires_grad) x->ensure_grad();
            Tensor gcols({okk, static_cast<int>(icols)});
            for (int i = 0; i < n; ++i) {
                // im2col over the output gradient, same geometry as forward.
                im2col(node.grad.ptr() + i * out_plane, o, oh, ow, kh, kw, stride, pad, h, wd,
                       gcols.ptr());
                if (x->requires_grad) {
                    MMap(x->grad.ptr() + i * in_plane, c, static_cast<int>(icols)).noalias() +=
                        CMap(w->value.ptr(), c, okk) *
                        CMap(gcols.ptr(), okk, static_cast<int>(icols));
                }
                if (w->requires_grad) {
                    MMap(w->grad.ptr(), c, okk).noalias() +=
                        CMap(x->value.ptr() + i * in_plane, c, static_cast<int>(icols)) *
                        CMap(gcols.ptr(), okk, static_cast<int>(icols)).transpose();
                }
            }
        });
}

}  // namespace spp::nn
