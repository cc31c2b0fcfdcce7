// Copyright 2026 the hhebin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <zlib.h>

#include "hhebin/pixmap.hpp"

// File I/O for the three supported formats: binary PGM (P5, maxval 255),
// binary PPM (P6, maxval 255), and non-interlaced 8-bit PNG (grayscale or
// RGB). Loading dispatches on the file's magic bytes, saving on the target
// extension. PGM is the canonical golden-test format because it is
// byte-inspectable; save followed by load is bit-exact for gray and binary
// images in both formats.

namespace hhebin {

/// Result of load_image: PGM and single-channel PNG decode to GrayImage,
/// PPM and RGB PNG to RgbImage.
using LoadedImage = std::variant<GrayImage, RgbImage>;

namespace detail {

// Guards against absurd header dimensions before allocating.
inline constexpr std::size_t max_pixels = std::size_t(1) << 28;

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path.string() + " for reading");
    }
    std::vector<std::uint8_t> data(
        (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw io_error("error while reading " + path.string());
    }
    return data;
}

inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
        throw io_error("error while writing " + path.string());
    }
}

// ---------------------------------------------------------------------------
// PNM (P5 / P6)

class PnmParser {
public:
    explicit PnmParser(const std::vector<std::uint8_t>& data) : data_(data) {}

    LoadedImage parse() {
        if (data_.size() < 2) {
            throw format_error("not a supported image (file too short)", data_.size());
        }
        const bool color = data_[1] == '6';
        pos_ = 2;
        const long width = parse_number("width");
        const long height = parse_number("height");
        const long maxval = parse_number("maxval");
        if (width < 1 || height < 1) {
            throw format_error("PNM dimensions must be positive", pos_);
        }
        if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) >
            max_pixels) {
            throw format_error("PNM dimensions unreasonably large", pos_);
        }
        if (maxval != 255) {
            throw format_error("PNM maxval must be 255", pos_);
        }
        // Exactly one whitespace byte separates the header from the raster.
        if (pos_ >= data_.size() || !is_space(data_[pos_])) {
            throw format_error("expected whitespace before PNM raster", pos_);
        }
        ++pos_;
        const std::size_t channels = color ? 3 : 1;
        const std::size_t raster =
            static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
        if (data_.size() - pos_ < raster) {
            throw format_error("truncated PNM raster", data_.size());
        }
        std::vector<std::uint8_t> pixels(data_.begin() + pos_,
                                         data_.begin() + pos_ + raster);
        if (color) {
            return RgbImage(static_cast<int>(width), static_cast<int>(height),
                            std::move(pixels));
        }
        return GrayImage(static_cast<int>(width), static_cast<int>(height),
                         std::move(pixels));
    }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    }

    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            if (is_space(data_[pos_])) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                return;
            }
        }
    }

    long parse_number(const char* what) {
        skip_space_and_comments();
        if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) {
            throw format_error(std::string("expected PNM ") + what, pos_);
        }
        long value = 0;
        while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
            value = value * 10 + (data_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw format_error(std::string("PNM ") + what + " out of range", pos_);
            }
            ++pos_;
        }
        return value;
    }

    const std::vector<std::uint8_t>& data_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// PNG

inline constexpr std::array<std::uint8_t, 8> png_signature = {
    0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

inline std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint8_t paeth_predictor(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

// Reverses one filtered scanline in place. `prev` is the reconstructed
// previous row (null for the first row), `bpp` the bytes per pixel.
inline void unfilter_row(std::uint8_t filter, std::uint8_t* row,
                         const std::uint8_t* prev, std::size_t len,
                         std::size_t bpp, std::size_t row_offset) {
    switch (filter) {
        case 0:
            break;
        case 1:  // Sub
            for (std::size_t i = bpp; i < len; ++i) row[i] += row[i - bpp];
            break;
        case 2:  // Up
            if (prev) {
                for (std::size_t i = 0; i < len; ++i) row[i] += prev[i];
            }
            break;
        case 3:  // Average
            for (std::size_t i = 0; i < len; ++i) {
                const int left = i >= bpp ? row[i - bpp] : 0;
                const int up = prev ? prev[i] : 0;
                row[i] += static_cast<std::uint8_t>((left + up) / 2);
            }
            break;
        case 4:  // Paeth
            for (std::size_t i = 0; i < len; ++i) {
                const int left = i >= bpp ? row[i - bpp] : 0;
                const int up = prev ? prev[i] : 0;
                const int upleft = (prev && i >= bpp) ? prev[i - bpp] : 0;
                row[i] += paeth_predictor(left, up, upleft);
            }
            break;
        default:
            throw format_error("unknown PNG filter type " + std::to_string(filter),
                               row_offset);
    }
}

inline LoadedImage parse_png(const std::vector<std::uint8_t>& data) {
    for (std::size_t i = 0; i < png_signature.size(); ++i) {
        if (i >= data.size() || data[i] != png_signature[i]) {
            throw format_error("bad PNG signature", i);
        }
    }

    std::size_t pos = 8;
    bool seen_ihdr = false;
    bool seen_iend = false;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t channels = 0;
    std::vector<std::uint8_t> idat;
    std::size_t first_idat_offset = 0;

    while (!seen_iend) {
        if (data.size() - pos < 12) {
            throw format_error("truncated PNG chunk", data.size());
        }
        const std::size_t chunk_start = pos;
        const std::uint32_t length = read_be32(&data[pos]);
        if (length > (std::uint32_t(1) << 30) ||
            data.size() - pos - 12 < length) {
            throw format_error("PNG chunk overruns file", chunk_start);
        }
        const std::uint8_t* type = &data[pos + 4];
        const std::uint8_t* payload = &data[pos + 8];
        const std::uint32_t stored_crc = read_be32(&data[pos + 8 + length]);
        const std::uint32_t actual_crc = static_cast<std::uint32_t>(
            ::crc32(::crc32(0L, type, 4), payload, length));
        if (stored_crc != actual_crc) {
            throw format_error("PNG chunk CRC mismatch", pos + 8 + length);
        }
        const std::string name(reinterpret_cast<const char*>(type), 4);
        pos += 12 + length;

        if (name == "IHDR") {
            if (seen_ihdr || length != 13) {
                throw format_error("invalid PNG IHDR", chunk_start);
            }
            seen_ihdr = true;
            width = read_be32(payload);
            height = read_be32(payload + 4);
            const std::uint8_t bit_depth = payload[8];
            const std::uint8_t color_type = payload[9];
            const std::uint8_t compression = payload[10];
            const std::uint8_t filter = payload[11];
            const std::uint8_t interlace = payload[12];
            if (width == 0 || height == 0 ||
                std::size_t(width) * std::size_t(height) > max_pixels) {
                throw format_error("PNG dimensions invalid", chunk_start + 8);
            }
            if (bit_depth != 8) {
                throw format_error("unsupported PNG bit depth " +
                                       std::to_string(bit_depth),
                                   chunk_start + 16);
            }
            if (color_type == 0) {
                channels = 1;
            } else if (color_type == 2) {
                channels = 3;
            } else {
                throw format_error("unsupported PNG color type " +
                                       std::to_string(color_type),
                                   chunk_start + 17);
            }
            if (compression != 0 || filter != 0) {
                throw format_error("unsupported PNG compression/filter method",
                                   chunk_start + 18);
            }
            if (interlace != 0) {
                throw format_error("interlaced PNG is not supported",
                                   chunk_start + 20);
            }
        } else if (name == "IDAT") {
            if (!seen_ihdr) {
                throw format_error("PNG IDAT before IHDR", chunk_start);
            }
            if (idat.empty()) first_idat_offset = chunk_start;
            idat.insert(idat.end(), payload, payload + length);
        } else if (name == "IEND") {
            seen_iend = true;
        } else if (!(type[0] & 0x20)) {
            // Critical chunk we do not understand (palette etc.).
            throw format_error("unsupported critical PNG chunk " + name,
                               chunk_start + 4);
        }
        // Ancillary chunks are skipped.
    }
    if (!seen_ihdr) {
        throw format_error("PNG has no IHDR", 8);
    }
    if (idat.empty()) {
        throw format_error("PNG has no IDAT", data.size());
    }

    const std::size_t stride = std::size_t(width) * channels;
    const std::size_t raw_size = (stride + 1) * height;
    std::vector<std::uint8_t> raw(raw_size);
    uLongf dest_len = raw_size;
    const int zrc = ::uncompress(raw.data(), &dest_len, idat.data(),
                                 static_cast<uLong>(idat.size()));
    if (zrc != Z_OK || dest_len != raw_size) {
        throw format_error("PNG pixel data does not decompress to the expected size",
                           first_idat_offset);
    }

    std::vector<std::uint8_t> pixels(stride * height);
    const std::uint8_t* prev = nullptr;
    for (std::uint32_t y = 0; y < height; ++y) {
        const std::size_t row_offset = std::size_t(y) * (stride + 1);
        const std::uint8_t filter = raw[row_offset];
        std::uint8_t* dst = pixels.data() + std::size_t(y) * stride;
        std::memcpy(dst, raw.data() + row_offset + 1, stride);
        unfilter_row(filter, dst, prev, stride, channels,
                     first_idat_offset + row_offset);
        prev = dst;
    }

    if (channels == 1) {
        return GrayImage(static_cast<int>(width), static_cast<int>(height),
                         std::move(pixels));
    }
    return RgbImage(static_cast<int>(width), static_cast<int>(height),
                    std::move(pixels));
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char* name,
                         const std::uint8_t* payload, std::size_t length) {
    put_be32(out, static_cast<std::uint32_t>(length));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), name, name + 4);
    out.insert(out.end(), payload, payload + length);
    const std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0L, out.data() + type_pos, static_cast<uInt>(4 + length)));
    put_be32(out, crc);
}

// Encodes 8-bit gray (channels == 1) or RGB (channels == 3) pixels as a
// non-interlaced PNG with filter type 0 on every row.
inline std::vector<std::uint8_t> encode_png(int width, int height,
                                            int channels,
                                            const std::vector<std::uint8_t>& pixels) {
    const std::size_t stride = std::size_t(width) * channels;
    std::vector<std::uint8_t> raw((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + std::size_t(y) * (stride + 1);
        row[0] = 0;
        std::memcpy(row + 1, pixels.data() + std::size_t(y) * stride, stride);
    }

    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (::compress2(compressed.data(), &bound, raw.data(),
                    static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION) != Z_OK) {
        throw io_error("PNG compression failed");
    }
    compressed.resize(bound);

    std::vector<std::uint8_t> out(png_signature.begin(), png_signature.end());
    std::array<std::uint8_t, 13> ihdr{};
    ihdr[0] = static_cast<std::uint8_t>(std::uint32_t(width) >> 24);
    ihdr[1] = static_cast<std::uint8_t>(std::uint32_t(width) >> 16);
    ihdr[2] = static_cast<std::uint8_t>(std::uint32_t(width) >> 8);
    ihdr[3] = static_cast<std::uint8_t>(std::uint32_t(width));
    ihdr[4] = static_cast<std::uint8_t>(std::uint32_t(height) >> 24);
    ihdr[5] = static_cast<std::uint8_t>(std::uint32_t(height) >> 16);
    ihdr[6] = static_cast<std::uint8_t>(std::uint32_t(height) >> 8);
    ihdr[7] = static_cast<std::uint8_t>(std::uint32_t(height));
    ihdr[8] = 8;                                   // bit depth
    ihdr[9] = channels == 1 ? 0 : 2;               // color type
    ihdr[10] = 0;                                  // compression
    ihdr[11] = 0;                                  // filter method
    ihdr[12] = 0;                                  // no interlace
    append_chunk(out, "IHDR", ihdr.data(), ihdr.size());
    append_chunk(out, "IDAT", compressed.data(), compressed.size());
    append_chunk(out, "IEND", nullptr, 0);
    return out;
}

inline std::vector<std::uint8_t> encode_pgm(int width, int height,
                                            const std::vector<std::uint8_t>& pixels) {
    const std::string header = "P5\n" + std::to_string(width) + " " +
                               std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

enum class SaveFormat { pgm, png };

inline SaveFormat format_for(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") return SaveFormat::pgm;
    if (ext == ".png") return SaveFormat::png;
    throw std::invalid_argument("unsupported output extension '" + ext +
                                "' for " + path.string() + " (use .pgm or .png)");
}

inline void save_gray_pixels(int width, int height,
                             const std::vector<std::uint8_t>& pixels,
                             const std::filesystem::path& path) {
    switch (format_for(path)) {
        case SaveFormat::pgm:
            write_file(path, encode_pgm(width, height, pixels));
            break;
        case SaveFormat::png:
            write_file(path, encode_png(width, height, 1, pixels));
            break;
    }
}

}  // namespace detail

/// Decodes a PNG, binary PGM, or binary PPM file, dispatching on the magic
/// bytes. Unreadable files raise io_error; malformed content raises
/// format_error naming the offending byte offset.
inline LoadedImage load_image(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = detail::read_file(path);
    if (data.empty()) {
        throw format_error("empty file " + path.string(), 0);
    }
    if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6')) {
        return detail::PnmParser(data).parse();
    }
    if (data[0] == 0x89) {
        return detail::parse_png(data);
    }
    throw format_error("unrecognized image format in " + path.string(), 0);
}

/// Writes a grayscale image as binary PGM or PNG depending on the extension.
inline void save_image(const GrayImage& img, const std::filesystem::path& path) {
    detail::save_gray_pixels(img.width(), img.height(), img.pixels(), path);
}

/// Writes a two-tone image as binary PGM or PNG depending on the extension.
inline void save_image(const BinaryImage& img, const std::filesystem::path& path) {
    detail::save_gray_pixels(img.width(), img.height(), img.pixels(), path);
}

/// Writes a membership map as an 8-bit gray image, scaling each value with
/// the fixed round-half-up rule (v -> round(v * 255)).
inline void save_image(const MembershipMap& map, const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes(map.value_count());
    const std::vector<double>& values = map.values();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = round_half_up_byte(values[i] * 255.0);
    }
    detail::save_gray_pixels(map.width(), map.height(), bytes, path);
}

}  // namespace hhebin
