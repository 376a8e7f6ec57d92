#include "spp/eval/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace spp::eval {

double mse(const img::Image& a, const img::Image& b) {
    if (a.h != b.h || a.w != b.w) throw ShapeMismatch("mse: image shapes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        s += d * d;
    }
    return s / static_cast<double>(a.data.size());
}

double psnr(const img::Image& a, const img::Image& b) {
    const double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / m);
}

namespace {

constexpr int kWin = 11;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

const std::vector<double>& gaussian_kernel() {
    static const std::vector<double> k = [] {
        std::vector<double> v(kWin);
        const double sigma = 1.5;
        double sum = 0.0;
        for (int i = 0; i < kWin; ++i) {
            const double x = i - (kWin - 1) / 2.0;
            v[static_cast<std::size_t>(i)] = std::exp(-x * x / (2.0 * sigma * sigma));
            sum += v[static_cast<std::size_t>(i)];
        }
        for (double& x : v) x /= sum;
        return v;
    }();
    return k;
}

/// Separable Gaussian filter, valid region only: (h,w) -> (h-10, w-10).
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w) {
    const auto& k = gaussian_kernel();
    const int ow = w - kWin + 1;
    const int oh = h - kWin + 1;
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < kWin; ++i) s += k[static_cast<std::size_t>(i)] * src[y * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < kWin; ++i) {
                s += k[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            }
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

}  // namespace

double ssim(const img::Image& a, const img::Image& b) {
    if (a.h != b.h || a.w != b.w) throw ShapeMismatch("ssim: image shapes differ");
    if (a.h < kWin || a.w < kWin) throw ShapeMismatch("ssim: image smaller than the window");
    const int h = a.h;
    const int w = a.w;
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> x(static_cast<std::size_t>(h) * w);
        std::vector<double> y(static_cast<std::size_t>(h) * w);
        std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
        for (int i = 0; i < h * w; ++i) {
            const double xv = a.data[static_cast<std::size_t>(i) * 3 + c];
            const double yv = b.data[static_cast<std::size_t>(i) * 3 + c];
            x[static_cast<std::size_t>(i)] = xv;
            y[static_cast<std::size_t>(i)] = yv;
            xx[static_cast<std::size_t>(i)] = xv * xv;
            yy[static_cast<std::size_t>(i)] = yv * yv;
            xy[static_cast<std::size_t>(i)] = xv * yv;
        }
        const auto mu_x = filter_valid(x, h, w);
        const auto mu_y = filter_valid(y, h, w);
        const auto m_xx = filter_valid(xx, h, w);
        const auto m_yy = filter_valid(yy, h, w);
        const auto m_xy = filter_valid(xy, h, w);
        double acc = 0.0;
        for (std::size_t i = 0; i < mu_x.size(); ++i) {
            const double mx = mu_x[i];
            const double my = mu_y[i];
            const double vx = m_xx[i] - mx * mx;
            const double vy = m_yy[i] - my * my;
            const double cov = m_xy[i] - mx * my;
            acc += ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
                   ((mx * mx + my * my + kC1) * (vx + vy + kC2));
        }
        total += acc / static_cast<double>(mu_x.size());
    }
    return total / 3.0;
}

void MetricPluginRegistry::register_metric(const std::string& name, Metric fn) {
    metrics_[name] = std::move(fn);
}

bool MetricPluginRegistry::has(const std::string& name) const { return metrics_.count(name) > 0; }

double MetricPluginRegistry::evaluate(const std::string& name, const img::Image& a,
                                      const img::Image& b) const {
    const auto it = metrics_.find(name);
    if (it == metrics_.end()) throw ConfigError("no metric plugin named \"" + name + "\"");
    return it->second(a, b);
}

std::vector<std::string> MetricPluginRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, fn] : metrics_) out.push_back(name);
    return out;
}

MetricPluginRegistry& MetricPluginRegistry::global() {
    static MetricPluginRegistry registry;
    return registry;
}

}  // namespace spp::eval
