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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhebin/histeq.hpp"
#include "hhebin/pixmap.hpp"
#include "hhebin/preprocess.hpp"

// The hierarchical part of the binarizer. An image is partitioned into a
// quadtree: level 0 is the whole image, and each level-l cell splits at its
// floor midpoints into four level-(l+1) cells (an axis of size 1 stops
// splitting, so cells are never empty). Every level yields a full-extent
// membership map by equalizing each cell independently; the per-level maps
// are fused with weights (level+1)^2, favoring local statistics, and the
// fused value is thresholded at 0.5 (strictly greater goes white).

namespace hhebin {

/// Contiguous inclusive range of quadtree levels.
class LevelRange {
public:
    /// Beyond this depth every cell of any practical image is one pixel.
    static constexpr int max_level = 12;

    LevelRange(int lmin, int lmax) : lmin_(lmin), lmax_(lmax) {
        if (lmin < 0 || lmax < lmin || lmax > max_level) {
            throw std::invalid_argument(
                "LevelRange: need 0 <= lmin <= lmax <= " +
                std::to_string(max_level) + ", got " + std::to_string(lmin) +
                ".." + std::to_string(lmax));
        }
    }

    int lmin() const noexcept { return lmin_; }
    int lmax() const noexcept { return lmax_; }
    int count() const noexcept { return lmax_ - lmin_ + 1; }

    bool operator==(const LevelRange&) const = default;

private:
    int lmin_;
    int lmax_;
};

/// Per-level membership maps for a contiguous level range, all at the full
/// source-image extent.
class LevelStack {
public:
    LevelStack(int lmin, std::vector<MembershipMap> maps)
        : lmin_(lmin), maps_(std::move(maps)) {
        if (maps_.empty()) {
            throw std::invalid_argument("LevelStack: no maps");
        }
        if (lmin_ < 0 ||
            lmin_ + static_cast<int>(maps_.size()) - 1 > LevelRange::max_level) {
            throw std::invalid_argument("LevelStack: level range out of bounds");
        }
        for (const MembershipMap& m : maps_) {
            if (m.width() != maps_.front().width() ||
                m.height() != maps_.front().height()) {
                throw std::invalid_argument("LevelStack: mismatched map dimensions");
            }
        }
    }

    int lmin() const noexcept { return lmin_; }
    int lmax() const noexcept { return lmin_ + static_cast<int>(maps_.size()) - 1; }
    int width() const noexcept { return maps_.front().width(); }
    int height() const noexcept { return maps_.front().height(); }
    std::size_t size() const noexcept { return maps_.size(); }

    const MembershipMap& at_level(int level) const {
        if (level < lmin() || level > lmax()) {
            throw std::out_of_range("LevelStack: no level " + std::to_string(level));
        }
        return maps_[static_cast<std::size_t>(level - lmin_)];
    }

    const std::vector<MembershipMap>& maps() const noexcept { return maps_; }

private:
    int lmin_;
    std::vector<MembershipMap> maps_;
};

namespace detail {

// Recursive floor-midpoint split of [offset, offset+size) to the given
// depth; a segment of size 1 persists unsplit. Appends (offset, size) pairs
// in ascending order.
inline void split_axis(int offset, int size, int level,
                       std::vector<std::pair<int, int>>& out) {
    if (level == 0 || size == 1) {
        out.emplace_back(offset, size);
        return;
    }
    const int left = size / 2;
    split_axis(offset, left, level - 1, out);
    split_axis(offset + left, size - left, level - 1, out);
}

inline std::array<double, 256> membership_lut(const Histogram& hist) {
    std::array<double, 256> lut;
    for (int k = 0; k < 256; ++k) {
        lut[static_cast<std::size_t>(k)] = hist.membership(k);
    }
    return lut;
}

}  // namespace detail

/// The level-`level` quadtree cells of a w x h image, in row-major order of
/// cell origin. The recursive 2-D split factors into one recursive split per
/// axis, so the cells are exactly the cross product of the two axis
/// segmentations; for odd sizes this differs from a uniform 2^level grid.
inline std::vector<RegionRect> partition(int w, int h, int level) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("partition: image extent must be positive");
    }
    if (level < 0) {
        throw std::invalid_argument("partition: level must be non-negative");
    }
    std::vector<std::pair<int, int>> xs;
    std::vector<std::pair<int, int>> ys;
    detail::split_axis(0, w, level, xs);
    detail::split_axis(0, h, level, ys);
    std::vector<RegionRect> cells;
    cells.reserve(xs.size() * ys.size());
    for (const auto& [y0, ch] : ys) {
        for (const auto& [x0, cw] : xs) {
            cells.push_back(RegionRect{x0, y0, cw, ch});
        }
    }
    return cells;
}

/// Full-extent membership map at one level: every partition cell is
/// equalized against its own histogram of the input pixels (never against
/// previously equalized values), and each pixel is written exactly once.
inline MembershipMap level_membership(const GrayImage& img, int level) {
    const std::vector<RegionRect> cells = partition(img.width(), img.height(), level);
    std::vector<double> values(img.pixel_count());
    const std::vector<std::uint8_t>& px = img.pixels();
    for (const RegionRect& cell : cells) {
        const std::array<double, 256> lut =
            detail::membership_lut(region_histogram(img, cell));
        for (int y = cell.y; y < cell.y + cell.h; ++y) {
            const std::uint8_t* src = px.data() + std::size_t(y) * img.width();
            double* dst = values.data() + std::size_t(y) * img.width();
            for (int x = cell.x; x < cell.x + cell.w; ++x) {
                dst[x] = lut[src[x]];
            }
        }
    }
    return MembershipMap(img.width(), img.height(), std::move(values));
}

/// Builds the per-level maps for every level in `range`, ascending.
inline LevelStack build_level_stack(const GrayImage& img, const LevelRange& range) {
    std::vector<MembershipMap> maps;
    maps.reserve(static_cast<std::size_t>(range.count()));
    for (int level = range.lmin(); level <= range.lmax(); ++level) {
        maps.push_back(level_membership(img, level));
    }
    return LevelStack(range.lmin(), std::move(maps));
}

/// Fuses a stack into the net membership: per pixel,
/// f_net = sum_l f(l) * (l+1)^2 / sum_l (l+1)^2, levels summed ascending.
/// A one-level stack fuses to an exact copy of its map.
inline MembershipMap combine(const LevelStack& stack) {
    if (stack.size() == 1) {
        // (f*w)/w is not an fp identity for every weight, so the degenerate
        // case returns the map unchanged.
        return stack.maps().front();
    }
    double denom = 0.0;
    std::vector<double> weights(stack.size());
    for (int level = stack.lmin(); level <= stack.lmax(); ++level) {
        const double w = static_cast<double>((level + 1) * (level + 1));
        weights[static_cast<std::size_t>(level - stack.lmin())] = w;
        denom += w;
    }
    const std::size_t count = stack.maps().front().value_count();
    std::vector<double> net(count, 0.0);
    for (std::size_t li = 0; li < stack.size(); ++li) {
        const std::vector<double>& vals = stack.maps()[li].values();
        const double w = weights[li];
        for (std::size_t i = 0; i < count; ++i) {
            net[i] += vals[i] * w;
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        // The quotient of non-negative terms can land an ulp above 1 only
        // when every input is at the top of its range; clamping keeps the
        // container invariant and cannot move a value across 0.5.
        const double v = net[i] / denom;
        net[i] = v > 1.0 ? 1.0 : v;
    }
    return MembershipMap(stack.width(), stack.height(), std::move(net));
}

/// Thresholds a membership map: strictly greater than `threshold` goes
/// white, everything else (including exact equality) goes black.
inline BinaryImage binarize(const MembershipMap& net, double threshold = 0.5) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("binarize: threshold must be in [0,1]");
    }
    std::vector<std::uint8_t> out(net.value_count());
    const std::vector<double>& vals = net.values();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = vals[i] > threshold ? BinaryImage::white : BinaryImage::black;
    }
    return BinaryImage(net.width(), net.height(), std::move(out));
}

/// The whole pipeline: optional median filter, one membership map per level
/// in `range`, quadratic-weight fusion, threshold.
inline BinaryImage hhe_binarize(const GrayImage& img, const LevelRange& range,
                                double threshold = 0.5, bool median = true) {
    if (median) {
        const GrayImage filtered = median3x3(img);
        return binarize(combine(build_level_stack(filtered, range)), threshold);
    }
    return binarize(combine(build_level_stack(img, range)), threshold);
}

}  // namespace hhebin
