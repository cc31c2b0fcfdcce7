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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core image containers.
//
// Conventions fixed repo-wide: pixels are stored row-major with a top-left
// origin, and (x, y) addresses column x of row y. Containers validate their
// invariants on construction and are immutable afterwards, so they can be
// shared freely across threads.

namespace hhebin {

/// Failure to read or write a file.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed image data. offset() is the byte position that broke parsing.
class format_error : public std::runtime_error {
public:
    format_error(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at byte " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// One 8-bit RGB triple.
struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Axis-aligned pixel rectangle: origin (x, y), extent w x h.
struct RegionRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend bool operator==(const RegionRect&, const RegionRect&) = default;
};

/// Rounds to the nearest integer with halves going up, clamped to [0, 255].
/// The one fractional-to-byte rule used everywhere, so golden images stay
/// stable.
inline std::uint8_t round_half_up_byte(double v) {
    const double r = std::floor(v + 0.5);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

namespace detail {

inline void check_dims(int width, int height, std::size_t count,
                       std::size_t per_pixel, const char* what) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument(std::string(what) +
                                    ": width and height must be positive");
    }
    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * per_pixel;
    if (count != expected) {
        throw std::invalid_argument(std::string(what) + ": pixel count " +
                                    std::to_string(count / per_pixel) +
                                    " does not match " + std::to_string(width) +
                                    "x" + std::to_string(height));
    }
}

}  // namespace detail

/// 8-bit grayscale image, the universal working representation.
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        detail::check_dims(width_, height_, pixels_.size(), 1, "GrayImage");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return pixels_.size(); }

    std::uint8_t at(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// 24-bit RGB image, stored as packed row-major R,G,B bytes.
class RgbImage {
public:
    RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
        : width_(width), height_(height), data_(std::move(interleaved)) {
        detail::check_dims(width_, height_, data_.size(), 3, "RgbImage");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return data_.size() / 3; }

    Rgb at(int x, int y) const {
        const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
        return Rgb{data_[i], data_[i + 1], data_[i + 2]};
    }

    const std::vector<std::uint8_t>& data() const noexcept { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Two-tone image; every pixel is exactly 0 (black) or 255 (white).
class BinaryImage {
public:
    static constexpr std::uint8_t black = 0;
    static constexpr std::uint8_t white = 255;

    BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        detail::check_dims(width_, height_, pixels_.size(), 1, "BinaryImage");
        for (std::size_t i = 0; i < pixels_.size(); ++i) {
            if (pixels_[i] != black && pixels_[i] != white) {
                throw std::invalid_argument(
                    "BinaryImage: value " + std::to_string(pixels_[i]) +
                    " at index " + std::to_string(i) + " is neither 0 nor 255");
            }
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return pixels_.size(); }

    std::uint8_t at(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Per-pixel fractional values in [0, 1]: the likeliness of each pixel to be
/// white. Construction rejects NaN and out-of-range values.
class MembershipMap {
public:
    MembershipMap(int width, int height, std::vector<double> values)
        : width_(width), height_(height), values_(std::move(values)) {
        detail::check_dims(width_, height_, values_.size(), 1, "MembershipMap");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            // The negated comparison also rejects NaN.
            if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
                throw std::invalid_argument(
                    "MembershipMap: value at index " + std::to_string(i) +
                    " is outside [0, 1]");
            }
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t value_count() const noexcept { return values_.size(); }

    double at(int x, int y) const {
        return values_[static_cast<std::size_t>(y) * width_ + x];
    }

    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const MembershipMap&, const MembershipMap&) = default;

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

namespace detail {

inline void check_rect(const RegionRect& rect, int width, int height,
                       const char* what) {
    if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 ||
        rect.x + rect.w > width || rect.y + rect.h > height) {
        throw std::out_of_range(
            std::string(what) + ": rect (" + std::to_string(rect.x) + "," +
            std::to_string(rect.y) + " " + std::to_string(rect.w) + "x" +
            std::to_string(rect.h) + ") does not lie inside " +
            std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace detail

/// Extracts the sub-image covered by rect. The source is unchanged.
inline GrayImage crop(const GrayImage& img, const RegionRect& rect) {
    detail::check_rect(rect, img.width(), img.height(), "crop");
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(rect.w) * rect.h);
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
        const std::uint8_t* row = img.pixels().data() +
                                  static_cast<std::size_t>(y) * img.width();
        out.insert(out.end(), row + rect.x, row + rect.x + rect.w);
    }
    return GrayImage(rect.w, rect.h, std::move(out));
}

/// Reinterprets a grayscale image as two-tone. Any value other than 0 or 255
/// is an error; used for loading ground-truth masks.
inline BinaryImage binary_from_gray(const GrayImage& img) {
    return BinaryImage(img.width(), img.height(), img.pixels());
}

}  // namespace hhebin
