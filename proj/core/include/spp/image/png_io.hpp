#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spp/image/image.hpp"

namespace spp::img {

/// Encodes 8-bit RGB PNG bytes (color type 2, no ancillary chunks, filter 0),
/// deterministic for a given image.
std::vector<std::uint8_t> encode_png(const Image& im);

/// Decodes 8-bit RGB PNGs written by encode_png (all 5 scanline filters
/// accepted). Throws CorruptDataset on malformed input.
Image decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::string& path, const Image& im);
Image read_png(const std::string& path);

/// CRC32 (zlib polynomial) of a byte buffer; the dataset checksum primitive.
std::uint32_t crc32_of(const std::vector<std::uint8_t>& bytes);
std::uint32_t crc32_of_file(const std::string& path);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace spp::img
