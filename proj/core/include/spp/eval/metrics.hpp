#pragma once

#include <functional>
#include <map>
#include <string>

#include "spp/image/image.hpp"

namespace spp::eval {

/// Mean squared error over all pixels/channels; inputs in [0,1].
double mse(const img::Image& a, const img::Image& b);

/// 10*log10(1/mse); +infinity for identical inputs.
double psnr(const img::Image& a, const img::Image& b);

/// Structural similarity with an 11x11 Gaussian window (sigma 1.5), standard
/// stabilizing constants (K1=0.01, K2=0.03, L=1), valid-region windows,
/// averaged over channels.
double ssim(const img::Image& a, const img::Image& b);

/// Registry for external perceptual metrics (frame pair -> scalar).
class MetricPluginRegistry {
public:
    using Metric = std::function<double(const img::Image&, const img::Image&)>;

    void register_metric(const std::string& name, Metric fn);
    bool has(const std::string& name) const;
    double evaluate(const std::string& name, const img::Image& a, const img::Image& b) const;
    std::vector<std::string> names() const;

    static MetricPluginRegistry& global();

private:
    std::map<std::string, Metric> metrics_;
};

}  // namespace spp::eval
