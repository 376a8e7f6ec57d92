#include "spp/lang/embedding.hpp"

#include <json.hpp>
#include <zlib.h>

#include <cstring>
#include <fstream>

namespace spp::lang {

EmbeddingTable EmbeddingTable::from_static(std::map<std::string, std::vector<float>> records,
                                           int d_emb, const std::string& source_tag) {
    EmbeddingTable t;
    t.source_tag_ = source_tag;
    t.d_emb_ = d_emb;
    for (const auto& [text, vec] : records) {
        if (static_cast<int>(vec.size()) != d_emb) {
            throw DimensionMismatch("embedding for \"" + text + "\" has wrong dimension");
        }
    }
    t.records_ = std::move(records);
    return t;
}

EmbeddingTable EmbeddingTable::from_encoder(std::shared_ptr<LocalTextEncoder> encoder) {
    EmbeddingTable t;
    t.source_tag_ = "trained-locally";
    t.d_emb_ = encoder->config().d_emb;
    t.encoder_ = std::move(encoder);
    return t;
}

EmbeddingTable EmbeddingTable::hash_random(int d_emb, std::uint64_t seed) {
    EmbeddingTable t;
    t.source_tag_ = "hash-random";
    t.d_emb_ = d_emb;
    t.hash_seed_ = seed;
    return t;
}

std::vector<float> EmbeddingTable::lookup(const std::string& text) const {
    if (encoder_) return encoder_->embed(text);
    if (source_tag_ == "hash-random") {
        Rng rng(Rng::mix(hash_seed_, Rng::hash_str(text)));
        std::vector<float> v(static_cast<std::size_t>(d_emb_));
        const float s = 1.0f / std::sqrt(static_cast<float>(d_emb_));
        for (float& x : v) x = rng.normal_f() * s;
        return v;
    }
    const auto it = records_.find(text);
    if (it == records_.end()) {
        throw MissingEmbedding("no embedding for \"" + text + "\" in " + source_tag_ + " table");
    }
    return it->second;
}

std::uint32_t EmbeddingTable::checksum() const {
    std::uint32_t crc = ::crc32(0, nullptr, 0);
    if (encoder_) {
        for (const auto& t : encoder_->params().values) {
            crc = ::crc32(crc, reinterpret_cast<const Bytef*>(t.ptr()),
                          static_cast<uInt>(t.numel() * sizeof(float)));
        }
        return crc;
    }
    if (source_tag_ == "hash-random") {
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(&hash_seed_), sizeof(hash_seed_));
        return crc;
    }
    for (const auto& [text, vec] : records_) {
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(text.data()),
                      static_cast<uInt>(text.size()));
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(vec.data()),
                      static_cast<uInt>(vec.size() * sizeof(float)));
    }
    return crc;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'P', 'E', 'M', 'B', '0', '1'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CorruptDataset("truncated embedding file");
    return v;
}

std::uint32_t records_crc(const std::map<std::string, std::vector<float>>& records) {
    std::uint32_t crc = ::crc32(0, nullptr, 0);
    for (const auto& [text, vec] : records) {
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(text.data()),
                      static_cast<uInt>(text.size()));
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(vec.data()),
                      static_cast<uInt>(vec.size() * sizeof(float)));
    }
    return crc;
}

}  // namespace

void EmbeddingTable::export_file(const std::string& path,
                                 const std::vector<std::string>& texts) const {
    std::map<std::string, std::vector<float>> records;
    for (const std::string& t : texts) records.emplace(t, lookup(t));

    nlohmann::ordered_json header{{"format_version", kEmbeddingFormatVersion},
                                  {"d_emb", d_emb_},
                                  {"count", records.size()},
                                  {"source_tag", source_tag_},
                                  {"checksum", records_crc(records)}};
    const std::string hj = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out.write(kMagic, 8);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(hj.size()));
    out.write(hj.data(), static_cast<std::streamsize>(hj.size()));
    for (const auto& [text, vec] : records) {
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.write(reinterpret_cast<const char*>(vec.data()),
                  static_cast<std::streamsize>(vec.size() * sizeof(float)));
    }
}

EmbeddingTable EmbeddingTable::import_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactMissing("cannot open embedding file " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) {
        throw VersionMismatch(path + " is not an embedding import file");
    }
    const auto hlen = read_pod<std::uint32_t>(in);
    std::string hj(hlen, '\0');
    in.read(hj.data(), hlen);
    nlohmann::json header = nlohmann::json::parse(hj);
    if (header.at("format_version").get<int>() != kEmbeddingFormatVersion) {
        throw VersionMismatch("embedding format_version mismatch in " + path);
    }
    const int d = header.at("d_emb").get<int>();
    const auto count = header.at("count").get<std::size_t>();
    std::map<std::string, std::vector<float>> records;
    for (std::size_t i = 0; i < count; ++i) {
        const auto tlen = read_pod<std::uint32_t>(in);
        std::string text(tlen, '\0');
        in.read(text.data(), tlen);
        std::vector<float> vec(static_cast<std::size_t>(d));
        in.read(reinterpret_cast<char*>(vec.data()),
                static_cast<std::streamsize>(vec.size() * sizeof(float)));
        if (!in) throw CorruptDataset("truncated embedding records in " + path);
        records.emplace(std::move(text), std::move(vec));
    }
    if (records_crc(records) != header.at("checksum").get<std::uint32_t>()) {
        throw CorruptDataset("embedding checksum mismatch in " + path);
    }
    return from_static(std::move(records), d, "pretrained-import");
}

std::vector<float> embed_text(const std::string& text, const EmbeddingTable& table) {
    return table.lookup(text);
}

}  // namespace spp::lang
