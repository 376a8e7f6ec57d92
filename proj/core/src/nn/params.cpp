#include "spp/nn/params.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace spp::nn {

int Params::add(const std::string& name, Tensor t) {
    if (index.count(name)) throw ConfigError("duplicate parameter name: " + name);
    const int i = static_cast<int>(values.size());
    names.push_back(name);
    values.push_back(std::move(t));
    index.emplace(name, i);
    return i;
}

int Params::find(const std::string& name) const {
    auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
}

std::size_t Params::numel() const {
    std::size_t n = 0;
    for (const auto& v : values) n += v.numel();
    return n;
}

Bound bind(const Params& params, bool requires_grad) {
    Bound b;
    b.vars.reserve(params.count());
    for (const auto& v : params.values) b.vars.push_back(leaf(v, requires_grad));
    return b;
}

std::vector<Tensor> grads_of(const Params& params, const Bound& bound) {
    std::vector<Tensor> grads;
    grads.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        const Var& v = bound.vars[i];
        grads.push_back(v->grad.empty() ? Tensor::zeros(params.values[i].shape) : v->grad);
    }
    return grads;
}

void accumulate(std::vector<Tensor>& into, const std::vector<Tensor>& grads) {
    if (into.empty()) {
        into = grads;
        return;
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        for (std::size_t j = 0; j < grads[i].numel(); ++j) {
            into[i].data[j] += grads[i].data[j];
        }
    }
}

void scale_grads(std::vector<Tensor>& grads, float s) {
    for (auto& g : grads) {
        for (float& v : g.data) v *= s;
    }
}

float clip_grads(std::vector<Tensor>& grads, float max_norm) {
    double sq = 0.0;
    for (const auto& g : grads) {
        for (float v : g.data) sq += static_cast<double>(v) * v;
    }
    const float norm = static_cast<float>(std::sqrt(sq));
    if (norm > max_norm && norm > 0.0f) scale_grads(grads, max_norm / norm);
    return norm;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'P', 'C', '0', '0', '0', '1'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CorruptDataset("truncated container");
    return v;
}

}  // namespace

void save_container(const std::string& path, const std::string& meta_json,
                    const Params& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out.write(kMagic, 8);
    write_pod<std::uint64_t>(out, meta_json.size());
    out.write(meta_json.data(), static_cast<std::streamsize>(meta_json.size()));
    write_pod<std::uint64_t>(out, params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        const std::string& name = params.names[i];
        const Tensor& t = params.values[i];
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
        for (int d : t.shape) write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(d));
        out.write(reinterpret_cast<const char*>(t.ptr()),
                  static_cast<std::streamsize>(t.numel() * sizeof(float)));
    }
    if (!out) throw Error("short write to " + path);
}

Container load_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactMissing("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) {
        throw VersionMismatch(path + " is not a recognized checkpoint container");
    }
    Container c;
    const auto meta_len = read_pod<std::uint64_t>(in);
    c.meta_json.resize(meta_len);
    in.read(c.meta_json.data(), static_cast<std::streamsize>(meta_len));
    const auto count = read_pod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<std::uint32_t>(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto rank = read_pod<std::uint32_t>(in);
        std::vector<int> shape(rank);
        for (auto& d : shape) d = static_cast<int>(read_pod<std::uint32_t>(in));
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.ptr()),
                static_cast<std::streamsize>(t.numel() * sizeof(float)));
        if (!in) throw CorruptDataset("truncated tensor data in " + path);
        c.params.add(name, std::move(t));
    }
    return c;
}

}  // namespace spp::nn
