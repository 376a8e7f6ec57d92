#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "spp/nn/autodiff.hpp"

namespace spp::nn {

/// Ordered, named parameter registry. Models register tensors once at
/// construction and address them by index afterwards.
struct Params {
    std::vector<std::string> names;
    std::vector<Tensor> values;
    std::unordered_map<std::string, int> index;

    int add(const std::string& name, Tensor t);
    int find(const std::string& name) const;  // -1 if absent
    Tensor& at(int i) { return values[static_cast<std::size_t>(i)]; }
    const Tensor& at(int i) const { return values[static_cast<std::size_t>(i)]; }
    std::size_t count() const { return values.size(); }
    std::size_t numel() const;
};

/// Leaf variables for one forward/backward pass. Each bind copies the values,
/// so concurrent workers never share graph state.
struct Bound {
    std::vector<Var> vars;
    const Var& operator[](int i) const { return vars[static_cast<std::size_t>(i)]; }
};

Bound bind(const Params& params, bool requires_grad);

/// Gradients accumulated in a Bound, aligned with the Params order (zeros
/// where a parameter was unused).
std::vector<Tensor> grads_of(const Params& params, const Bound& bound);

void accumulate(std::vector<Tensor>& into, const std::vector<Tensor>& grads);
void scale_grads(std::vector<Tensor>& grads, float s);
/// Global-norm gradient clipping; returns the pre-clip norm.
float clip_grads(std::vector<Tensor>& grads, float max_norm);

// ---------------------------------------------------------------------------
// Binary checkpoint container: a JSON meta document plus named float32 blobs.

struct Container {
    std::string meta_json;  // serialized JSON (ordered)
    Params params;
};

void save_container(const std::string& path, const std::string& meta_json, const Params& params);
Container load_container(const std::string& path);

}  // namespace spp::nn
