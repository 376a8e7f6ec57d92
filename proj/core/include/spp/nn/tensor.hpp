#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spp/common/errors.hpp"
#include "spp/common/rng.hpp"

namespace spp::nn {

/// Dense float32 tensor, row-major, rank <= 4.
struct Tensor {
    std::vector<int> shape;
    std::vector<float> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel_of(shape), 0.0f) {}
    Tensor(std::vector<int> s, std::vector<float> d) : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != numel_of(shape)) throw ShapeMismatch("tensor data does not match shape");
    }

    static std::size_t numel_of(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) n *= static_cast<std::size_t>(d);
        return n;
    }

    std::size_t numel() const { return data.size(); }
    int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }
    int rank() const { return static_cast<int>(shape.size()); }
    bool empty() const { return data.empty(); }

    float* ptr() { return data.data(); }
    const float* ptr() const { return data.data(); }

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }
    static Tensor full(std::vector<int> s, float v) {
        Tensor t(std::move(s));
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }
    static Tensor randn(std::vector<int> s, Rng& rng, float stddev) {
        Tensor t(std::move(s));
        for (float& x : t.data) x = rng.normal_f() * stddev;
        return t;
    }
    /// Xavier-uniform for a [out, in] matrix.
    static Tensor xavier(int out, int in, Rng& rng) {
        Tensor t({out, in});
        const float bound = std::sqrt(6.0f / static_cast<float>(in + out));
        for (float& x : t.data) x = static_cast<float>(rng.uniform(-bound, bound));
        return t;
    }

    std::string shape_str() const;
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace spp::nn
