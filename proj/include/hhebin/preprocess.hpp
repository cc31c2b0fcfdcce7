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
#include <cstdint>
#include <vector>

#include "hhebin/pixmap.hpp"

namespace hhebin {

/// Converts a color pixel to its gray value with the red-weighted mix
/// 0.59*R + 0.30*G + 0.11*B, rounded half up. The mix intentionally favors
/// red: the intended inputs are vehicle frames where plate glyphs separate
/// best on the red-heavy channel.
inline std::uint8_t gray_value(Rgb px) {
    return round_half_up_byte(0.59 * px.r + 0.30 * px.g + 0.11 * px.b);
}

/// Applies gray_value to every pixel of a color image.
inline GrayImage to_gray(const RgbImage& img) {
    std::vector<std::uint8_t> out(img.pixel_count());
    const std::vector<std::uint8_t>& src = img.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = gray_value(Rgb{src[3 * i], src[3 * i + 1], src[3 * i + 2]});
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

/// 3x3 median filter with clamp-to-edge replication at the borders. Each
/// output pixel is the 5th-smallest of the 9 samples in its window (the
/// window always includes the center pixel itself).
inline GrayImage median3x3(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    const std::vector<std::uint8_t>& src = img.pixels();
    std::vector<std::uint8_t> out(src.size());
    std::array<std::uint8_t, 9> window;
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, w - 1);
            const std::array<int, 3> xs = {xm, x, xp};
            const std::array<int, 3> ys = {ym, y, yp};
            int n = 0;
            for (int ry : ys) {
                const std::uint8_t* row = src.data() + std::size_t(ry) * w;
                for (int rx : xs) window[n++] = row[rx];
            }
            std::nth_element(window.begin(), window.begin() + 4, window.end());
            out[std::size_t(y) * w + x] = window[4];
        }
    }
    return GrayImage(w, h, std::move(out));
}

}  // namespace hhebin
