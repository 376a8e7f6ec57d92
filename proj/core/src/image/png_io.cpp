#include "spp/image/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace spp::img {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const std::uint32_t crc = ::crc32(0, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32(out, crc);
}

std::vector<std::uint8_t> zlib_compress(const std::vector<std::uint8_t>& raw) {
    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> out(bound);
    if (::compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw Error("zlib compression failed");
    }
    out.resize(bound);
    return out;
}

std::vector<std::uint8_t> zlib_decompress(const std::vector<std::uint8_t>& comp,
                                          std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    uLongf len = static_cast<uLongf>(expected);
    if (::uncompress(out.data(), &len, comp.data(), static_cast<uLong>(comp.size())) != Z_OK ||
        len != expected) {
        throw CorruptDataset("zlib decompression failed");
    }
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& im) {
    const std::vector<std::uint8_t> pixels = quantize8(im);
    const std::size_t stride = static_cast<std::size_t>(im.w) * 3;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * im.h);
    for (int y = 0; y < im.h; ++y) {
        raw.push_back(0);  // filter type 0 (None)
        raw.insert(raw.end(), pixels.begin() + y * stride, pixels.begin() + (y + 1) * stride);
    }

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(im.w));
    put_u32(ihdr, static_cast<std::uint32_t>(im.h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type RGB
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace

    std::vector<std::uint8_t> out(kSig, kSig + 8);
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", zlib_compress(raw));
    put_chunk(out, "IEND", {});
    return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSig, 8) != 0) {
        throw CorruptDataset("not a PNG file");
    }
    std::size_t pos = 8;
    int w = 0;
    int h = 0;
    std::vector<std::uint8_t> idat;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t len = get_u32(bytes.data() + pos);
        if (pos + 12 + len > bytes.size()) throw CorruptDataset("truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
        const std::uint8_t* payload = bytes.data() + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw CorruptDataset("bad IHDR");
            w = static_cast<int>(get_u32(payload));
            h = static_cast<int>(get_u32(payload + 4));
            if (payload[8] != 8 || payload[9] != 2 || payload[12] != 0) {
                throw CorruptDataset("unsupported PNG format (need 8-bit RGB, no interlace)");
            }
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (w <= 0 || h <= 0 || idat.empty()) throw CorruptDataset("missing PNG data");

    const std::size_t stride = static_cast<std::size_t>(w) * 3;
    std::vector<std::uint8_t> raw = zlib_decompress(idat, (stride + 1) * h);

    std::vector<std::uint8_t> pixels(stride * h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t filter = raw[y * (stride + 1)];
        const std::uint8_t* src = raw.data() + y * (stride + 1) + 1;
        std::uint8_t* dst = pixels.data() + y * stride;
        const std::uint8_t* up = y > 0 ? pixels.data() + (y - 1) * stride : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            const int a = x >= 3 ? dst[x - 3] : 0;
            const int b = up ? up[x] : 0;
            const int c = (up && x >= 3) ? up[x - 3] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw CorruptDataset("unknown PNG filter");
            }
            dst[x] = static_cast<std::uint8_t>(v & 0xff);
        }
    }
    return dequantize8(pixels, h, w);
}

void write_png(const std::string& path, const Image& im) {
    write_file_bytes(path, encode_png(im));
}

Image read_png(const std::string& path) { return decode_png(read_file_bytes(path)); }

std::uint32_t crc32_of(const std::vector<std::uint8_t>& bytes) {
    return ::crc32(0, bytes.data(), static_cast<uInt>(bytes.size()));
}

std::uint32_t crc32_of_file(const std::string& path) {
    return crc32_of(read_file_bytes(path));
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactMissing("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace spp::img
