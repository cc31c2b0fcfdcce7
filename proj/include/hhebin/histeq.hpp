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

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "hhebin/pixmap.hpp"

// Per-region histogram statistics and the CDF-valued membership at the core
// of the binarizer. For a region with N pixels and C_k pixels at or below
// gray level k, a pixel of level k has membership C_k / N. This is the
// classic equalization transfer function with its customary *255 scaling
// cancelled against the later /255 normalization, so the division happens
// exactly once and no quantization sneaks in between.

namespace hhebin {

/// Gray-level occupancy of one region: per-bin counts, the running
/// cumulative sum, and the region total.
struct Histogram {
    std::array<std::uint64_t, 256> counts{};
    std::array<std::uint64_t, 256> cumulative{};
    std::uint64_t total = 0;

    /// Membership of gray level k: C_k / N as a single double division.
    double membership(int k) const {
        return static_cast<double>(cumulative[static_cast<std::size_t>(k)]) /
               static_cast<double>(total);
    }

    /// The equalized gray value on the conventional [0,255] scale. Only for
    /// diagnostics; the binarizer itself never leaves the [0,1] domain.
    double stretched(int k) const { return membership(k) * 255.0; }
};

/// Builds the histogram of the pixels inside `rect`.
///
/// Throws std::out_of_range when the rect is empty or exceeds the image.
inline Histogram region_histogram(const GrayImage& img, const RegionRect& rect) {
    detail::check_rect(rect, img.width(), img.height(), "region_histogram");
    Histogram hist;
    const std::vector<std::uint8_t>& px = img.pixels();
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
        const std::uint8_t* row = px.data() + std::size_t(y) * img.width();
        for (int x = rect.x; x < rect.x + rect.w; ++x) {
            ++hist.counts[row[x]];
        }
    }
    std::uint64_t running = 0;
    for (int k = 0; k < 256; ++k) {
        running += hist.counts[static_cast<std::size_t>(k)];
        hist.cumulative[static_cast<std::size_t>(k)] = running;
    }
    hist.total = running;
    return hist;
}

/// Membership map over `rect` only (dimensions rect.w x rect.h): each pixel
/// of gray level k maps to C_k / N of the rect's own histogram. Values lie
/// in (0,1]; the region's maximum present level always maps to exactly 1.0,
/// and a constant region is all 1.0.
inline MembershipMap region_membership(const GrayImage& img,
                                       const RegionRect& rect) {
    const Histogram hist = region_histogram(img, rect);
    // Precomputing the 256 possible values keeps the per-pixel work to a
    // table lookup and guarantees equal gray levels share one bit pattern.
    std::array<double, 256> lut;
    for (int k = 0; k < 256; ++k) {
        lut[static_cast<std::size_t>(k)] = hist.membership(k);
    }
    std::vector<double> values(std::size_t(rect.w) * rect.h);
    const std::vector<std::uint8_t>& px = img.pixels();
    std::size_t i = 0;
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
        const std::uint8_t* row = px.data() + std::size_t(y) * img.width();
        for (int x = rect.x; x < rect.x + rect.w; ++x) {
            values[i++] = lut[row[x]];
        }
    }
    return MembershipMap(rect.w, rect.h, std::move(values));
}

/// Debug dump: 256 CSV lines "k,count,cumulative".
inline void write_histogram_csv(const Histogram& hist, std::ostream& out) {
    for (int k = 0; k < 256; ++k) {
        out << k << ',' << hist.counts[static_cast<std::size_t>(k)] << ','
            << hist.cumulative[static_cast<std::size_t>(k)] << '\n';
    }
}

}  // namespace hhebin
