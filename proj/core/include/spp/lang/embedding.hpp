#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spp/lang/local_encoder.hpp"

namespace spp::lang {

constexpr int kEmbeddingFormatVersion = 1;

/// Text -> fixed-dimension vector. Three sources:
///   pretrained-import: a frozen file of records (MissingEmbedding off-table)
///   trained-locally:   backed by a LocalTextEncoder, total over any text
///   hash-random:       seeded per-text Gaussian, total (baseline)
class EmbeddingTable {
public:
    static EmbeddingTable from_static(std::map<std::string, std::vector<float>> records,
                                      int d_emb, const std::string& source_tag);
    static EmbeddingTable from_encoder(std::shared_ptr<LocalTextEncoder> encoder);
    static EmbeddingTable hash_random(int d_emb, std::uint64_t seed);

    int d_emb() const { return d_emb_; }
    const std::string& source_tag() const { return source_tag_; }

    std::vector<float> lookup(const std::string& text) const;

    /// Checksum over the table contents (static records, encoder parameters
    /// or the hash seed). Import files carry it in the header and loads
    /// verify it, so frozen embeddings stay bit-stable across a run.
    std::uint32_t checksum() const;

    /// Writes the spec'd import format, materializing records for `texts`.
    void export_file(const std::string& path, const std::vector<std::string>& texts) const;
    /// Reads an import file back as a pretrained-import table.
    static EmbeddingTable import_file(const std::string& path);

    const std::shared_ptr<LocalTextEncoder>& encoder() const { return encoder_; }

private:
    std::string source_tag_;
    int d_emb_ = 0;
    std::map<std::string, std::vector<float>> records_;
    std::shared_ptr<LocalTextEncoder> encoder_;
    std::uint64_t hash_seed_ = 0;
};

std::vector<float> embed_text(const std::string& text, const EmbeddingTable& table);

}  // namespace spp::lang
