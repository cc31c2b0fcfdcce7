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
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhebin/pixmap.hpp"

// Scoring against ground truth, plus the synthetic degraded-plate generator
// used to evaluate the binarizers on images with known truth masks. Text is
// black and is the positive class throughout.

namespace hhebin {

/// Pixel-level confusion counts; black (text) is the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

/// The four standard ratios; every 0/0 case defines to 0, so an all-white
/// prediction against a text-bearing truth scores 0 across the board.
struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double accuracy = 0.0;
};

/// Counts agreement between a prediction and a truth mask of equal size.
inline ConfusionCounts confusion(const BinaryImage& pred, const BinaryImage& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height()) {
        throw std::invalid_argument(
            "confusion: prediction and truth dimensions differ");
    }
    ConfusionCounts c;
    const std::vector<std::uint8_t>& p = pred.pixels();
    const std::vector<std::uint8_t>& t = truth.pixels();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool pred_text = p[i] == BinaryImage::black;
        const bool true_text = t[i] == BinaryImage::black;
        if (pred_text && true_text) {
            ++c.tp;
        } else if (pred_text && !true_text) {
            ++c.fp;
        } else if (!pred_text && true_text) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

inline Scores scores(const ConfusionCounts& c) {
    const auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0
                        : static_cast<double>(num) / static_cast<double>(den);
    };
    Scores s;
    s.precision = ratio(c.tp, c.tp + c.fp);
    s.recall = ratio(c.tp, c.tp + c.fn);
    s.f_measure = (s.precision + s.recall) == 0.0
                      ? 0.0
                      : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    s.accuracy = ratio(c.tp + c.tn, c.total());
    return s;
}

/// Header and row format for the metrics CSV emitted by the batch driver.
inline constexpr const char* metrics_csv_header =
    "image,method,levels,precision,recall,f_measure,accuracy";

/// One CSV row; fractions are printed with six fixed decimals.
inline std::string metrics_csv_row(const std::string& image,
                                   const std::string& method,
                                   const std::string& levels, const Scores& s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f", s.precision,
                  s.recall, s.f_measure, s.accuracy);
    return image + "," + method + "," + levels + buf;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

/// Deterministic 64-bit linear congruential generator,
/// state' = state * 6364136223846793005 + 1442695040888963407 (the MMIX
/// constants), so corpora are bit-reproducible on any platform. Draws take
/// the high 32 bits, which are the well-mixed ones for an LCG.
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint32_t next_u32() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::uint32_t>(state_ >> 32);
    }

    /// Uniform in [0,1): 32 bits of mantissa suffice for noise decisions.
    double next_double() { return next_u32() * (1.0 / 4294967296.0); }

    /// Uniform integer in [lo, hi] inclusive (modulo bias is irrelevant at
    /// the range sizes used here).
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_u32() %
                                     static_cast<std::uint32_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

/// How a synthetic plate is degraded. Amplitude is the gray-level drop of
/// the horizontal illumination ramp at the dark (left) edge; blur is a box
/// mean of the given radius; salt-pepper replaces each pixel with 0 or 255
/// at the given rate. The seed fixes glyph layout and noise.
struct DegradationSpec {
    int ramp_amplitude = 0;
    double salt_pepper_rate = 0.0;
    int blur_radius = 0;
    std::uint64_t seed = 0;
};

/// A generated plate: the degraded gray rendering and its truth mask.
struct SynthPlate {
    GrayImage gray;
    BinaryImage truth;
};

namespace detail {

// Box mean over the window clipped to the image (truncated window, no
// padding), rounded half up. Radii are tiny here, so the direct sum wins
// over a summed-area table on clarity.
inline GrayImage box_blur(const GrayImage& img, int radius) {
    if (radius == 0) return img;
    const int w = img.width();
    const int h = img.height();
    const std::vector<std::uint8_t>& src = img.pixels();
    std::vector<std::uint8_t> out(src.size());
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(y - radius, 0);
        const int y1 = std::min(y + radius, h - 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(x - radius, 0);
            const int x1 = std::min(x + radius, w - 1);
            std::uint64_t sum = 0;
            for (int yy = y0; yy <= y1; ++yy) {
                const std::uint8_t* row = src.data() + std::size_t(yy) * w;
                for (int xx = x0; xx <= x1; ++xx) sum += row[xx];
            }
            const int count = (y1 - y0 + 1) * (x1 - x0 + 1);
            out[std::size_t(y) * w + x] = round_half_up_byte(
                static_cast<double>(sum) / static_cast<double>(count));
        }
    }
    return GrayImage(w, h, std::move(out));
}

}  // namespace detail

/// Renders a plate-like test image: black rectangular glyph blocks on a
/// white truth mask, drawn to gray as 30 (text) on 220 (background), then
/// degraded by ramp, blur, and salt-pepper in that order.
///
/// Glyphs sit on a fixed column grid with width w/16 and pitch w/8; only
/// their vertical extent is jittered. The fixed grid keeps the text share
/// of any quadtree cell at levels 0..3 at or below one half (for w a
/// multiple of 16), so an undegraded plate binarizes perfectly and scoring
/// differences on degraded ones are attributable to the degradations.
inline SynthPlate synth_plate(const DegradationSpec& spec, int w, int h) {
    if (w < 32 || h < 32) {
        throw std::invalid_argument("synth_plate: need w,h >= 32");
    }
    if (spec.ramp_amplitude < 0 || spec.ramp_amplitude > 255) {
        throw std::invalid_argument("synth_plate: ramp amplitude outside [0,255]");
    }
    if (!(spec.salt_pepper_rate >= 0.0 && spec.salt_pepper_rate <= 1.0)) {
        throw std::invalid_argument("synth_plate: salt-pepper rate outside [0,1]");
    }
    if (spec.blur_radius < 0) {
        throw std::invalid_argument("synth_plate: blur radius must be >= 0");
    }

    Lcg64 rng(spec.seed);

    // Truth mask: glyph columns at x = gw, 3*gw, 5*gw, ... each gw wide.
    const int gw = std::max(2, w / 16);
    const int pitch = 2 * gw;
    std::vector<std::uint8_t> truth_px(std::size_t(w) * h, BinaryImage::white);
    for (int gx = gw; gx + gw <= w - gw; gx += pitch) {
        const int gh = rng.next_int(h / 3, h / 2);
        const int gy = rng.next_int(h / 6, h - gh - h / 6);
        for (int y = gy; y < gy + gh; ++y) {
            std::uint8_t* row = truth_px.data() + std::size_t(y) * w;
            for (int x = gx; x < gx + gw; ++x) row[x] = BinaryImage::black;
        }
    }
    BinaryImage truth(w, h, truth_px);

    // Clean rendering at 30/220, then the ramp darkening toward the left
    // edge: at column x, subtract amplitude * (w-1-x)/(w-1).
    std::vector<std::uint8_t> gray_px(truth_px.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            const double base = truth_px[i] == BinaryImage::black ? 30.0 : 220.0;
            const double drop = static_cast<double>(spec.ramp_amplitude) *
                                static_cast<double>(w - 1 - x) /
                                static_cast<double>(w - 1);
            gray_px[i] = round_half_up_byte(base - drop);
        }
    }
    GrayImage gray = detail::box_blur(GrayImage(w, h, std::move(gray_px)),
                                      spec.blur_radius);

    if (spec.salt_pepper_rate > 0.0) {
        std::vector<std::uint8_t> noisy = gray.pixels();
        for (std::size_t i = 0; i < noisy.size(); ++i) {
            if (rng.next_double() < spec.salt_pepper_rate) {
                noisy[i] = rng.next_double() < 0.5 ? 0 : 255;
            }
        }
        gray = GrayImage(w, h, std::move(noisy));
    }

    return SynthPlate{std::move(gray), std::move(truth)};
}

}  // namespace hhebin
