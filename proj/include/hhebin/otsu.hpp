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

#include <cstdint>
#include <vector>

#include "hhebin/histeq.hpp"
#include "hhebin/pixmap.hpp"

namespace hhebin {

/// Canonical Otsu threshold: the k in [0,254] maximizing the between-class
/// variance w0*w1*(mu0-mu1)^2 of the split {<=k} / {>k}, smallest k on ties.
/// Candidates with an empty class score 0. A constant image returns its
/// constant value (degenerate single-class case; any fixed rule would do).
inline int otsu_threshold(const GrayImage& img) {
    const Histogram hist =
        region_histogram(img, RegionRect{0, 0, img.width(), img.height()});

    int lo = 0;
    while (hist.counts[static_cast<std::size_t>(lo)] == 0) ++lo;
    int hi = 255;
    while (hist.counts[static_cast<std::size_t>(hi)] == 0) --hi;
    if (lo == hi) {
        return lo;
    }

    std::uint64_t sum_all = 0;
    for (int k = 0; k < 256; ++k) {
        sum_all += static_cast<std::uint64_t>(k) *
                   hist.counts[static_cast<std::size_t>(k)];
    }

    const double n = static_cast<double>(hist.total);
    std::uint64_t count0 = 0;  // pixels at or below k
    std::uint64_t sum0 = 0;    // gray-value sum of those pixels
    int best_k = 0;
    double best_sigma = -1.0;
    for (int k = 0; k <= 254; ++k) {
        count0 += hist.counts[static_cast<std::size_t>(k)];
        sum0 += static_cast<std::uint64_t>(k) *
                hist.counts[static_cast<std::size_t>(k)];
        const std::uint64_t count1 = hist.total - count0;
        double sigma = 0.0;
        if (count0 != 0 && count1 != 0) {
            const double w0 = static_cast<double>(count0) / n;
            const double w1 = static_cast<double>(count1) / n;
            const double mu0 =
                static_cast<double>(sum0) / static_cast<double>(count0);
            const double mu1 = static_cast<double>(sum_all - sum0) /
                               static_cast<double>(count1);
            const double d = mu0 - mu1;
            sigma = w0 * w1 * d * d;
        }
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_k = k;
        }
    }
    return best_k;
}

/// Thresholds at otsu_threshold: gray <= T goes black, the rest white.
inline BinaryImage otsu_binarize(const GrayImage& img) {
    const int t = otsu_threshold(img);
    std::vector<std::uint8_t> out(img.pixel_count());
    const std::vector<std::uint8_t>& px = img.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = px[i] <= t ? BinaryImage::black : BinaryImage::white;
    }
    return BinaryImage(img.width(), img.height(), std::move(out));
}

}  // namespace hhebin
