#include "spp/nn/autodiff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace spp::nn {

namespace {

thread_local std::uint64_t g_seq = 0;

using EMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

bool any_requires_grad(const std::vector<Var>& parents) {
    for (const auto& p : parents) {
        if (p->requires_grad) return true;
    }
    return false;
}

/// Generic unary op from value fn and d(out)/d(in) as a function of input
/// value and output value.
Var unary(const Var& a, float (*fwd)(float), float (*dfdx)(float, float)) {
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = fwd(a->value.data[i]);
    return make_node(std::move(out), {a}, [dfdx](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.value.numel(); ++i) {
            a->grad.data[i] += n.grad.data[i] * dfdx(a->value.data[i], n.value.data[i]);
        }
    });
}

}  // namespace

Var leaf(Tensor value, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    n->seq = ++g_seq;
    return n;
}

Var make_node(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backprop) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = any_requires_grad(parents);
    n->parents = std::move(parents);
    if (n->requires_grad) n->backprop = std::move(backprop);
    n->seq = ++g_seq;
    return n;
}

void backward(const Var& loss) {
    if (loss->value.numel() != 1) throw ShapeMismatch("backward needs a scalar loss");
    // Reachable set, then reverse creation order (a valid reverse topo order
    // because parents are always created before children).
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<Node*> stack{loss.get()};
    seen.insert(loss.get());
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        order.push_back(n);
        for (const auto& p : n->parents) {
            if (p->requires_grad && seen.insert(p.get()).second) stack.push_back(p.get());
        }
    }
    std::sort(order.begin(), order.end(),
              [](const Node* a, const Node* b) { return a->seq > b->seq; });
    loss->ensure_grad();
    loss->grad.data[0] = 1.0f;
    for (Node* n : order) {
        if (n->backprop && !n->grad.empty()) n->backprop(*n);
    }
}

// ---------------------------------------------------------------------------
// Elementwise

Var add(const Var& a, const Var& b) {
    check_same_shape(a->value, b->value, "add");
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out.data[i] = a->value.data[i] + b->value.data[i];
    }
    return make_node(std::move(out), {a, b}, [](Node& n) {
        for (const auto& p : n.parents) {
            if (!p->requires_grad) continue;
            p->ensure_grad();
            for (std::size_t i = 0; i < n.grad.numel(); ++i) p->grad.data[i] += n.grad.data[i];
        }
    });
}

Var sub(const Var& a, const Var& b) {
    check_same_shape(a->value, b->value, "sub");
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out.data[i] = a->value.data[i] - b->value.data[i];
    }
    return make_node(std::move(out), {a, b}, [](Node& n) {
        const Var& a = n.parents[0];
        const Var& b = n.parents[1];
        if (a->requires_grad) {
            a->ensure_grad();
            for (std::size_t i = 0; i < n.grad.numel(); ++i) a->grad.data[i] += n.grad.data[i];
        }
        if (b->requires_grad) {
            b->ensure_grad();
            for (std::size_t i = 0; i < n.grad.numel(); ++i) b->grad.data[i] -= n.grad.data[i];
        }
    });
}

Var mul(const Var& a, const Var& b) {
    check_same_shape(a->value, b->value, "mul");
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out.data[i] = a->value.data[i] * b->value.data[i];
    }
    return make_node(std::move(out), {a, b}, [](Node& n) {
        const Var& a = n.parents[0];
        const Var& b = n.parents[1];
        if (a->requires_grad) {
            a->ensure_grad();
            for (std::size_t i = 0; i < n.grad.numel(); ++i) {
                a->grad.data[i] += n.grad.data[i] * b->value.data[i];
            }
        }
        if (b->requires_grad) {
            b->ensure_grad();
            for (std::size_t i = 0; i < n.grad.numel(); ++i) {
                b->grad.data[i] += n.grad.data[i] * a->value.data[i];
            }
        }
    });
}

Var scale(const Var& a, float s) {
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a->value.data[i] * s;
    return make_node(std::move(out), {a}, [s](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.grad.numel(); ++i) a->grad.data[i] += n.grad.data[i] * s;
    });
}

Var add_scalar(const Var& a, float s) {
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a->value.data[i] + s;
    return make_node(std::move(out), {a}, [](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.grad.numel(); ++i) a->grad.data[i] += n.grad.data[i];
    });
}

Var neg(const Var& a) { return scale(a, -1.0f); }

Var sigmoid(const Var& a) {
    return unary(
        a, [](float x) { return 1.0f / (1.0f + std::exp(-x)); },
        [](float, float y) { return y * (1.0f - y); });
}

Var tanh_act(const Var& a) {
    return unary(
        a, [](float x) { return std::tanh(x); }, [](float, float y) { return 1.0f - y * y; });
}

Var relu(const Var& a) {
    return unary(
        a, [](float x) { return x > 0.0f ? x : 0.0f; },
        [](float x, float) { return x > 0.0f ? 1.0f : 0.0f; });
}

Var leaky_relu(const Var& a, float slope) {
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        const float x = a->value.data[i];
        out.data[i] = x > 0.0f ? x : slope * x;
    }
    return make_node(std::move(out), {a}, [slope](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.grad.numel(); ++i) {
            a->grad.data[i] += n.grad.data[i] * (a->value.data[i] > 0.0f ? 1.0f : slope);
        }
    });
}

Var exp_act(const Var& a) {
    return unary(
        a, [](float x) { return std::exp(x); }, [](float, float y) { return y; });
}

Var log_act(const Var& a) {
    return unary(
        a, [](float x) { return std::log(x); }, [](float x, float) { return 1.0f / x; });
}

Var square(const Var& a) {
    return unary(
        a, [](float x) { return x * x; }, [](float x, float) { return 2.0f * x; });
}

Var clamp(const Var& a, float lo, float hi) {
    Tensor out(a->value.shape);
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out.data[i] = std::clamp(a->value.data[i], lo, hi);
    }
    return make_node(std::move(out), {a}, [lo, hi](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.grad.numel(); ++i) {
            const float x = a->value.data[i];
            if (x > lo && x < hi) a->grad.data[i] += n.grad.data[i];
        }
    });
}

// ---------------------------------------------------------------------------
// Shape ops

Var reshape(const Var& a, std::vector<int> shape) {
    if (Tensor::numel_of(shape) != a->value.numel()) {
        throw ShapeMismatch("reshape changes element count");
    }
    Tensor out(std::move(shape), a->value.data);
    return make_node(std::move(out), {a}, [](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (std::size_t i = 0; i < n.grad.numel(); ++i) a->grad.data[i] += n.grad.data[i];
    });
}

Var concat_cols(const std::vector<Var>& xs) {
    const int n = xs[0]->value.dim(0);
    int total = 0;
    for (const auto& x : xs) {
        if (x->value.rank() != 2 || x->value.dim(0) != n) {
            throw ShapeMismatch("concat_cols needs [N,Di] with shared N");
        }
        total += x->value.dim(1);
    }
    Tensor out({n, total});
    int col = 0;
    for (const auto& x : xs) {
        const int d = x->value.dim(1);
        for (int r = 0; r < n; ++r) {
            std::copy_n(x->value.ptr() + static_cast<std::size_t>(r) * d, d,
                        out.ptr() + static_cast<std::size_t>(r) * total + col);
        }
        col += d;
    }
    return make_node(std::move(out), xs, [total, n](Node& node) {
        int col = 0;
        for (const auto& p : node.parents) {
            const int d = p->value.dim(1);
            if (p->requires_grad) {
                p->ensure_grad();
                for (int r = 0; r < n; ++r) {
                    const float* src = node.grad.ptr() + static_cast<std::size_t>(r) * total + col;
                    float* dst = p->grad.ptr() + static_cast<std::size_t>(r) * d;
                    for (int c = 0; c < d; ++c) dst[c] += src[c];
                }
            }
            col += d;
        }
    });
}

Var slice_cols(const Var& a, int start, int len) {
    if (a->value.rank() != 2) throw ShapeMismatch("slice_cols needs rank 2");
    const int n = a->value.dim(0);
    const int d = a->value.dim(1);
    if (start < 0 || start + len > d) throw ShapeMismatch("slice_cols out of range");
    Tensor out({n, len});
    for (int r = 0; r < n; ++r) {
        std::copy_n(a->value.ptr() + static_cast<std::size_t>(r) * d + start, len,
                    out.ptr() + static_cast<std::size_t>(r) * len);
    }
    return make_node(std::move(out), {a}, [start, len, n, d](Node& node) {
        const Var& a = node.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (int r = 0; r < n; ++r) {
            const float* src = node.grad.ptr() + static_cast<std::size_t>(r) * len;
            float* dst = a->grad.ptr() + static_cast<std::size_t>(r) * d + start;
            for (int c = 0; c < len; ++c) dst[c] += src[c];
        }
    });
}

Var concat_rows(const std::vector<Var>& xs) {
    const int d = xs[0]->value.dim(1);
    int total = 0;
    for (const auto& x : xs) {
        if (x->value.rank() != 2 || x->value.dim(1) != d) {
            throw ShapeMismatch("concat_rows needs [Ni,D] with shared D");
        }
        total += x->value.dim(0);
    }
    Tensor out({total, d});
    std::size_t off = 0;
    for (const auto& x : xs) {
        std::copy_n(x->value.ptr(), x->value.numel(), out.ptr() + off);
        off += x->value.numel();
    }
    return make_node(std::move(out), xs, [](Node& node) {
        std::size_t off = 0;
        for (const auto& p : node.parents) {
            if (p->requires_grad) {
                p->ensure_grad();
                for (std::size_t i = 0; i < p->grad.numel(); ++i) {
                    p->grad.data[i] += node.grad.data[off + i];
                }
            }
            off += p->value.numel();
        }
    });
}

Var slice_rows(const Var& a, int start, int len) {
    if (a->value.rank() != 2) throw ShapeMismatch("slice_rows needs rank 2");
    const int d = a->value.dim(1);
    if (start < 0 || start + len > a->value.dim(0)) throw ShapeMismatch("slice_rows out of range");
    Tensor out({len, d});
    std::copy_n(a->value.ptr() + static_cast<std::size_t>(start) * d, out.numel(), out.ptr());
    return make_node(std::move(out), {a}, [start, d](Node& node) {
        const Var& a = node.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        float* dst = a->grad.ptr() + static_cast<std::size_t>(start) * d;
        for (std::size_t i = 0; i < node.grad.numel(); ++i) dst[i] += node.grad.data[i];
    });
}

Var permute3(const Var& a, int p0, int p1, int p2) {
    if (a->value.rank() != 3) throw ShapeMismatch("permute3 needs rank 3");
    const int s[3] = {a->value.dim(0), a->value.dim(1), a->value.dim(2)};
    const int perm[3] = {p0, p1, p2};
    Tensor out({s[p0], s[p1], s[p2]});
    const std::size_t stride_in[3] = {static_cast<std::size_t>(s[1]) * s[2],
                                      static_cast<std::size_t>(s[2]), 1};
    std::size_t idx = 0;
    for (int i = 0; i < s[perm[0]]; ++i) {
        for (int j = 0; j < s[perm[1]]; ++j) {
            for (int k = 0; k < s[perm[2]]; ++k) {
                std::size_t src = static_cast<std::size_t>(i) * stride_in[perm[0]] +
                                  static_cast<std::size_t>(j) * stride_in[perm[1]] +
                                  static_cast<std::size_t>(k) * stride_in[perm[2]];
                out.data[idx++] = a->value.data[src];
            }
        }
    }
    return make_node(std::move(out), {a}, [s = std::array<int, 3>{s[0], s[1], s[2]},
                                           perm = std::array<int, 3>{p0, p1, p2}](Node& node) {
        const Var& a = node.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        const std::size_t stride_in[3] = {static_cast<std::size_t>(s[1]) * s[2],
                                          static_cast<std::size_t>(s[2]), 1};
        std::size_t idx = 0;
        for (int i = 0; i < s[perm[0]]; ++i) {
            for (int j = 0; j < s[perm[1]]; ++j) {
                for (int k = 0; k < s[perm[2]]; ++k) {
                    std::size_t src = static_cast<std::size_t>(i) * stride_in[perm[0]] +
                                      static_cast<std::size_t>(j) * stride_in[perm[1]] +
                                      static_cast<std::size_t>(k) * stride_in[perm[2]];
                    a->grad.data[src] += node.grad.data[idx++];
                }
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Reductions / losses

Var sum_all(const Var& a) {
    float s = 0.0f;
    for (float v : a->value.data) s += v;
    Tensor out({1});
    out.data[0] = s;
    return make_node(std::move(out), {a}, [](Node& n) {
        const Var& a = n.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        const float g = n.grad.data[0];
        for (std::size_t i = 0; i < a->grad.numel(); ++i) a->grad.data[i] += g;
    });
}

Var mean_all(const Var& a) {
    return scale(sum_all(a), 1.0f / static_cast<float>(a->value.numel()));
}

Var mse_loss(const Var& pred, const Var& target) {
    check_same_shape(pred->value, target->value, "mse_loss");
    double s = 0.0;
    for (std::size_t i = 0; i < pred->value.numel(); ++i) {
        const double d = static_cast<double>(pred->value.data[i]) - target->value.data[i];
        s += d * d;
    }
    Tensor out({1});
    out.data[0] = static_cast<float>(s / static_cast<double>(pred->value.numel()));
    return make_node(std::move(out), {pred, target}, [](Node& n) {
        const Var& p = n.parents[0];
        const Var& t = n.parents[1];
        const float g = n.grad.data[0] * 2.0f / static_cast<float>(p->value.numel());
        if (p->requires_grad) {
            p->ensure_grad();
            for (std::size_t i = 0; i < p->grad.numel(); ++i) {
                p->grad.data[i] += g * (p->value.data[i] - t->value.data[i]);
            }
        }
        if (t->requires_grad) {
            t->ensure_grad();
            for (std::size_t i = 0; i < t->grad.numel(); ++i) {
                t->grad.data[i] -= g * (p->value.data[i] - t->value.data[i]);
            }
        }
    });
}

Var softmax_rows(const Var& a) {
    if (a->value.rank() != 2) throw ShapeMismatch("softmax_rows needs rank 2");
    const int n = a->value.dim(0);
    const int d = a->value.dim(1);
    Tensor out(a->value.shape);
    for (int r = 0; r < n; ++r) {
        const float* x = a->value.ptr() + static_cast<std::size_t>(r) * d;
        float* y = out.ptr() + static_cast<std::size_t>(r) * d;
        float mx = x[0];
        for (int c = 1; c < d; ++c) mx = std::max(mx, x[c]);
        float z = 0.0f;
        for (int c = 0; c < d; ++c) {
            y[c] = std::exp(x[c] - mx);
            z += y[c];
        }
        for (int c = 0; c < d; ++c) y[c] /= z;
    }
    return make_node(std::move(out), {a}, [n, d](Node& node) {
        const Var& a = node.parents[0];
        if (!a->requires_grad) return;
        a->ensure_grad();
        for (int r = 0; r < n; ++r) {
            const float* y = node.value.ptr() + static_cast<std::size_t>(r) * d;
            const float* gy = node.grad.ptr() + static_cast<std::size_t>(r) * d;
            float* gx = a->grad.ptr() + static_cast<std::size_t>(r) * d;
            float dot = 0.0f;
            for (int c = 0; c < d; ++c) dot += y[c] * gy[c];
            for (int c = 0; c < d; ++c) gx[c] += y[c] * (gy[c] - dot);
        }
    });
}

Var cross_entropy_logits(const Var& logits, const std::vector<int>& targets,
                         const std::vector<float>& weights) {
    if (logits->value.rank() != 2) throw ShapeMismatch("cross_entropy needs [N,V]");
    const int n = logits->value.dim(0);
    const int v = logits->value.dim(1);
    if (static_cast<int>(targets.size()) != n || static_cast<int>(weights.size()) != n) {
        throw ShapeMismatch("cross_entropy targets/weights must match rows");
    }
    double wsum = 0.0;
    for (float w : weights) wsum += w;
    if (wsum <= 0.0) throw ShapeMismatch("cross_entropy needs positive total weight");

    // Cache softmax for the backward pass.
    auto probs = std::make_shared<Tensor>(logits->value.shape);
    double loss = 0.0;
    for (int r = 0; r < n; ++r) {
        const float* x = logits->value.ptr() + static_cast<std::size_t>(r) * v;
        float* p = probs->ptr() + static_cast<std::size_t>(r) * v;
        float mx = x[0];
        for (int c = 1; c < v; ++c) mx = std::max(mx, x[c]);
        double z = 0.0;
        for (int c = 0; c < v; ++c) z += std::exp(static_cast<double>(x[c]) - mx);
        const double logz = std::log(z) + mx;
        for (int c = 0; c < v; ++c) {
            p[c] = static_cast<float>(std::exp(static_cast<double>(x[c]) - logz));
        }
        loss += weights[r] * (logz - x[targets[r]]);
    }
    Tensor out({1});
    out.data[0] = static_cast<float>(loss / wsum);
    return make_node(std::move(out), {logits},
                     [probs, targets, weights, wsum, n, v](Node& node) {
                         const Var& a = node.parents[0];
                         if (!a->requires_grad) return;
                         a->ensure_grad();
                         const float g = node.grad.data[0] / static_cast<float>(wsum);
                         for (int r = 0; r < n; ++r) {
                             if (weights[r] == 0.0f) continue;
                             const float* p = probs->ptr() + static_cast<std::size_t>(r) * v;
                             float* gx = a->grad.ptr() + static_cast<std::size_t>(r) * v;
                             const float gw = g * weights[r];
                             for (int c = 0; c < v; ++c) gx[c] += gw * p[c];
                             gx[targets[r]] -= gw;
                         }
                     });
}

// ---------------------------------------------------------------------------
// Linear algebra

Var matmul(const Var& a, const Var& b) {
    if (a->value.rank() != 2 || b->value.rank() != 2 || a->value.dim(1) != b->value.dim(0)) {
        throw ShapeMismatch("matmul: " + a->value.shape_str() + " x " + b->value.shape_str());
    }
    const int m = a->value.dim(0);
    const int k = a->value.dim(1);
    const int n = b->value.dim(1);
    Tensor out({m, n});
    MMap(out.ptr(), m, n).noalias() = CMap(a->value.ptr(), m, k) * CMap(b->value.ptr(), k, n);
    return make_node(std::move(out), {a, b}, [m, k, n](Node& node) {
        const Var& a = node.parents[0];
        const Var& b = node.parents[1];
        CMap g(node.grad.ptr(), m, n);
        if (a->requires_grad) {
            a->ensure_grad();
            MMap(a->grad.ptr(), m, k).noalias() += g * CMap(b->value.ptr(), k, n).transpose();
        }
        if (b->requires_grad) {
            b->ensure_grad();
            MMap(b->grad.ptr(), k, n).noalias() += CMap(a->value.ptr(), m, k).transpose() * g;
        }
    });
}

Var linear(const Var& x, const Var& w, const Var& b) {
    if (x->value.rank() != 2 || w->value.rank() != 2 || x->value.dim(1) != w->value.dim(1)) {
        throw ShapeMismatch("linear: x " + x->value.shape_str() + ", w " + w->value.shape_str());
    }
    const int n = x->value.dim(0);
    const int k = x->value.dim(1);
    const int o = w->value.dim(0);
    if (b->value.rank() != 1 || b->value.dim(0) != o) throw ShapeMismatch("linear bias");
    Tensor out({n, o});
    MMap(out.ptr(), n, o).noalias() =
        CMap(x->value.ptr(), n, k) * CMap(w->value.ptr(), o, k).transpose();
    for (int r = 0; r < n; ++r) {
        float* row = out.ptr() + static_cast<std::size_t>(r) * o;
        for (int c = 0; c < o; ++c) row[c] += b->value.data[c];
    }
    return make_node(std::move(out), {x, w, b}, [n, k, o](Node& node) {
        const Var& x = node.parents[0];
        const Var& w = node.parents[1];
        const Var& b = node.parents[2];
        CMap g(node.grad.ptr(), n, o);
        if (x->requires_grad) {
            x->ensure_grad();
            MMap(x->grad.ptr(), n, k).noalias() += g * CMap(w->value.ptr(), o, k);
        }
        if (w->requires_grad) {
            w->ensure_grad();
            MMap(w->grad.ptr(), o, k).noalias() +=
                g.transpose() * CMap(x->value.ptr(), n, k);
        }
        if (b->requires_grad) {
            b->ensure_grad();
            for (int r = 0; r < n; ++r) {
                const float* row = node.grad.ptr() + static_cast<std::size_t>(r) * o;
                for (int c = 0; c < o; ++c) b->grad.data[c] += row[c];
            }
        }
    });
}

Var bmm(const Var& a, const Var& b, bool trans_a, bool trans_b) {
    if (a->value.rank() != 3 || b->value.rank() != 3 || a->value.dim(0) != b->value.dim(0)) {
        throw ShapeMismatch("bmm needs rank-3 with shared batch");
    }
    const int batch = a->value.dim(0);
    const int m = trans_a ? a->value.dim(2) : a->value.dim(1);
    const int k = trans_a ? a->value.dim(1) : a->value.dim(2);
    const int kb = trans_b ? b->value.dim(2) : b->value.dim(1);
    const int n = trans_b ? b->value.dim(1) : b->value.dim(2);
    if (k != kb) throw ShapeMismatch("bmm inner dims");
    Tensor out({batch, m, n});
    const std::size_t sa = a->value.numel() / batch;
    const std::size_t sb = b->value.numel() / batch;
    const std::size_t so = static_cast<std::size_t>(m) * n;
    for (int i = 0; i < batch; ++i) {
        CMap am(a->value.ptr() + i * sa, trans_a ? k : m, trans_a ? m : k);
        CMap bm(b->value.ptr() + i * sb, trans_b ? n : k, trans_b ? k : n);
        MMap om(out.ptr() + i * so, m, n);
        if (!trans_a && !trans_b) om.noalias() = am * bm;
        else if (trans_a && !trans_b) om.noalias() = am.transpose() * bm;
        else if (!trans_a && trans_b) om.noalias() = am * bm.transpose();
        else om.noalias() = am.transpose() * bm.transpose();
    }
    return make_node(std::move(out), {a, b}, [batch, m, k, n, sa, sb, so, trans_a,
                                              trans_b](Node& node) {
        const Var& a = node.parents[0];
        const Var& b = node.parents[1];
        for (int i = 0; i < batch; ++i) {
            CMap g(node.grad.ptr() + i * so, m, n);
            CMap am(a->value.ptr() + i * sa, trans_a ? k : m, trans_a ? m : k);
            CMap bm(b->value.ptr() + i * sb, trans_b ? n : k, trans_b ? k : n);
            if (a->requires_grad) {
                a->ensure_grad();
                MMap ga(a->grad.ptr() + i * sa, trans_a ? k : m, trans_a ? m : k);
                if (!trans_a && !trans_b) ga.noalias() += g * bm.transpose();
                else if (!trans_a && trans_b) ga.noalias() += g * bm;
                else if (trans_a && !trans_b) ga.noalias() += bm * g.transpose();
                else ga.noalias() += bm.transpose() * g.transpose();
            }
            if (b->requires_grad) {
                b->ensure_grad();
                MMap gb(b->grad.ptr() + i * sb, trans_b ? n : k, trans_b ? k : n);
                if (!trans_a && !trans_b) gb.noalias() += am.transpose() * g;
                else if (trans_a && !trans_b) gb.noalias() += am * g;
                else if (!trans_a && trans_b) gb.noalias() += g.transpose() * am;
                else gb.noalias() += g.transpose() * am.transpose();
            }
        }
    });
}

Var embedding_lookup(const Var& table, const std::vector<int>& ids) {
    if (table->value.rank() != 2) throw ShapeMismatch("embedding table must be [V,D]");
    const int v = table->value.dim(0);
    const int d = table->value.dim(1);
    Tensor out({static_cast<int>(ids.size()), d});
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0 || ids[i] >= v) throw ShapeMismatch("embedding id out of range");
        std::copy_n(table->value.ptr() + static_cast<std::size_t>(ids[i]) * d, d,
                    out.ptr() + i * d);
    }
    return make_node(std::move(out), {table}, [ids, d](Node& node) {
        const Var& t = node.parents[0];
        if (!t->requires_grad) return;
        t->ensure_grad();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const float* src = node.grad.ptr() + i * d;
            float* dst = t->grad.ptr() + static_cast<std::size_t>(ids[i]) * d;
            for (int c = 0; c < d; ++c) dst[c] += src[c];
        }
    });
}

namespace {

/// Shared grouped-normalization kernel: normalizes `groups` contiguous runs
/// of `len` values each; gamma/beta indexed by aff_idx(group).
Var group_norm_impl(const Var& x, const Var& gamma, const Var& beta, float eps, int groups,
                    int len, std::function<int(int)> aff_idx, const char* name) {
    if (static_cast<std::size_t>(groups) * len != x->value.numel()) {
        throw ShapeMismatch(std::string(name) + ": bad grouping");
    }
    Tensor out(x->value.shape);
    auto mean = std::make_shared<std::vector<float>>(groups);
    auto inv_std = std::make_shared<std::vector<float>>(groups);
    for (int g = 0; g < groups; ++g) {
        const float* src = x->value.ptr() + static_cast<std::size_t>(g) * len;
        double m = 0.0;
        for (int i = 0; i < len; ++i) m += src[i];
        m /= len;
        double var = 0.0;
        for (int i = 0; i < len; ++i) {
            const double d = src[i] - m;
            var += d * d;
        }
        var /= len;
        const float istd = 1.0f / std::sqrt(static_cast<float>(var) + eps);
        (*mean)[g] = static_cast<float>(m);
        (*inv_std)[g] = istd;
        const int ai = aff_idx(g);
        const float gm = gamma->value.data[ai];
        const float bt = beta->value.data[ai];
        float* dst = out.ptr() + static_cast<std::size_t>(g) * len;
        for (int i = 0; i < len; ++i) {
            dst[i] = (src[i] - (*mean)[g]) * istd * gm + bt;
        }
    }
    return make_node(std::move(out), {x, gamma, beta},
                     [mean, inv_std, groups, len, aff_idx](Node& node) {
                         const Var& x = node.parents[0];
                         const Var& gamma = node.parents[1];
                         const Var& beta = node.parents[2];
                         const bool gx = x->requires_grad;
                         if (gx) x->ensure_grad();
                         if (gamma->requires_grad) gamma->ensure_grad();
                         if (beta->requires_grad) beta->ensure_grad();
                         for (int g = 0; g < groups; ++g) {
                             const int ai = aff_idx(g);
                             const float gm = gamma->value.data[ai];
                             const float istd = (*inv_std)[g];
                             const float mu = (*mean)[g];
                             const float* xg = x->value.ptr() + static_cast<std::size_t>(g) * len;
                             const float* gy = node.grad.ptr() + static_cast<std::size_t>(g) * len;
                             // xhat = (x - mu) * istd
                             float sum_gy = 0.0f;
                             float sum_gy_xhat = 0.0f;
                             for (int i = 0; i < len; ++i) {
                                 const float xhat = (xg[i] - mu) * istd;
                                 sum_gy += gy[i];
                                 sum_gy_xhat += gy[i] * xhat;
                             }
                             if (gamma->requires_grad) gamma->grad.data[ai] += sum_gy_xhat;
                             if (beta->requires_grad) beta->grad.data[ai] += sum_gy;
                             if (gx) {
                                 float* gxp = x->grad.ptr() + static_cast<std::size_t>(g) * len;
                                 const float inv_len = 1.0f / len;
                                 for (int i = 0; i < len; ++i) {
                                     const float xhat = (xg[i] - mu) * istd;
                                     gxp[i] += gm * istd *
                                               (gy[i] - inv_len * sum_gy -
                                                xhat * inv_len * sum_gy_xhat);
                                 }
                             }
                         }
                     });
}

}  // namespace

Var layer_norm_rows(const Var& x, const Var& gamma, const Var& beta, float eps) {
    if (x->value.rank() != 2) throw ShapeMismatch("layer_norm_rows needs [N,D]");
    const int n = x->value.dim(0);
    const int d = x->value.dim(1);
    if (gamma->value.numel() != static_cast<std::size_t>(d) ||
        beta->value.numel() != static_cast<std::size_t>(d)) {
        throw ShapeMismatch("layer_norm affine params must be [D]");
    }
    // One group per row; gamma/beta apply per column, so fold them by hand:
    // normalize rows with unit affine, then apply affine via mul/add of
    // broadcast rows would cost extra nodes. Instead treat each row as a
    // group and index affine by position; group_norm_impl indexes affine by
    // group, so do the affine inline here.
    Tensor out(x->value.shape);
    auto mean = std::make_shared<std::vector<float>>(n);
    auto inv_std = std::make_shared<std::vector<float>>(n);
    for (int r = 0; r < n; ++r) {
        const float* src = x->value.ptr() + static_cast<std::size_t>(r) * d;
        double m = 0.0;
        for (int i = 0; i < d; ++i) m += src[i];
        m /= d;
        double var = 0.0;
        for (int i = 0; i < d; ++i) {
            const double dd = src[i] - m;
            var += dd * dd;
        }
        var /= d;
        const float istd = 1.0f / std::sqrt(static_cast<float>(var) + eps);
        (*mean)[r] = static_cast<float>(m);
        (*inv_std)[r] = istd;
        float* dst = out.ptr() + static_cast<std::size_t>(r) * d;
        for (int i = 0; i < d; ++i) {
            dst[i] = (src[i] - (*mean)[r]) * istd * gamma->value.data[i] + beta->value.data[i];
        }
    }
    return make_node(
        std::move(out), {x, gamma, beta}, [mean, inv_std, n, d](Node& node) {
            const Var& x = node.parents[0];
            const Var& gamma = node.parents[1];
            const Var& beta = node.parents[2];
            if (x->requires_grad) x->ensure_grad();
            if (gamma->requires_grad) gamma->ensure_grad();
            if (beta->requires_grad) beta->ensure_grad();
            for (int r = 0; r < n; ++r) {
                const float istd = (*inv_std)[r];
                const float mu = (*mean)[r];
                const float* xg = x->value.ptr() + static_cast<std::size_t>(r) * d;
                const float* gy = node.grad.ptr() + static_cast<std::size_t>(r) * d;
                float sum_t = 0.0f;       // sum of gamma_i * gy_i
                float sum_t_xhat = 0.0f;  // sum of gamma_i * gy_i * xhat_i
                for (int i = 0; i < d; ++i) {
                    const float xhat = (xg[i] - mu) * istd;
                    const float t = gamma->value.data[i] * gy[i];
                    sum_t += t;
                    sum_t_xhat += t * xhat;
                    if (gamma->requires_grad) gamma->grad.data[i] += gy[i] * xhat;
                    if (beta->requires_grad) beta->grad.data[i] += gy[i];
                }
                if (x->requires_grad) {
                    float* gxp = x->grad.ptr() + static_cast<std::size_t>(r) * d;
                    const float inv_d = 1.0f / d;
                    for (int i = 0; i < d; ++i) {
                        const float xhat = (xg[i] - mu) * istd;
                        const float t = gamma->value.data[i] * gy[i];
                        gxp[i] += istd * (t - inv_d * sum_t - xhat * inv_d * sum_t_xhat);
                    }
                }
            }
        });
}

Var channel_norm(const Var& x, const Var& gamma, const Var& beta, float eps) {
    if (x->value.rank() != 4) throw ShapeMismatch("channel_norm needs [N,C,H,W]");
    const int c = x->value.dim(1);
    const int len = x->value.dim(2) * x->value.dim(3);
    const int groups = x->value.dim(0) * c;
    if (gamma->value.numel() != static_cast<std::size_t>(c)) {
        throw ShapeMismatch("channel_norm gamma must be [C]");
    }
    return group_norm_impl(x, gamma, beta, eps, groups, len,
                           [c](int g) { return g % c; }, "channel_norm");
}

}  // namespace spp::nn
