#include "spp/nn/tensor.hpp"

#include <sstream>

namespace spp::nn {

std::string Tensor::shape_str() const {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out << 'x';
        out << shape[i];
    }
    out << ']';
    return out.str();
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeMismatch(std::string(op) + ": shapes " + a.shape_str() + " vs " +
                            b.shape_str());
    }
}

}  // namespace spp::nn
