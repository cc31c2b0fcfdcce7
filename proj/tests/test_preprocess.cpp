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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "hhebin/preprocess.hpp"
#include "testutil.hpp"

using namespace hhebin;

TEST_CASE("gray conversion uses the red-weighted mix", "[preprocess]") {
    // 0.59*100 + 0.30*50 + 0.11*200 = 59 + 15 + 22 = 96.
    CHECK(gray_value(Rgb{100, 50, 200}) == 96);
    CHECK(gray_value(Rgb{0, 0, 0}) == 0);
    CHECK(gray_value(Rgb{255, 255, 255}) == 255);
    CHECK(gray_value(Rgb{1, 1, 1}) == 1);
    // 0.59*10 = 5.9 -> 6; green and blue weights pull fractions too.
    CHECK(gray_value(Rgb{10, 0, 0}) == 6);
    // Ties round up: 0.30*50 = 15, 0.11*50 = 5.5 -> (0,50,50) = 20.5 -> 21.
    CHECK(gray_value(Rgb{0, 50, 50}) == 21);
}

TEST_CASE("to_gray maps every pixel and keeps dimensions", "[preprocess]") {
    RgbImage img(2, 2,
                 {100, 50, 200, /**/ 0, 0, 0, /**/ 255, 255, 255, /**/ 1, 1, 1});
    const GrayImage gray = to_gray(img);
    CHECK(gray.width() == 2);
    CHECK(gray.height() == 2);
    CHECK(gray.pixels() == std::vector<std::uint8_t>{96, 0, 255, 1});
}

TEST_CASE("median3x3 keeps constant images unchanged", "[preprocess]") {
    GrayImage img(5, 4, std::vector<std::uint8_t>(20, 42));
    CHECK(median3x3(img) == img);
}

TEST_CASE("median3x3 removes isolated impulses", "[preprocess]") {
    // A single bright pixel inside a flat area is a 1-of-9 minority
    // everywhere its window lands, including at corners of images >= 2x2.
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 2 + int(rng() % 7);
        const int h = 2 + int(rng() % 7);
        std::vector<std::uint8_t> px(std::size_t(w) * h, 10);
        const int ix = int(rng() % unsigned(w));
        const int iy = int(rng() % unsigned(h));
        px[std::size_t(iy) * w + ix] = 250;
        const GrayImage filtered = median3x3(GrayImage(w, h, std::move(px)));
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) REQUIRE(filtered.at(x, y) == 10);
    }
}

TEST_CASE("median3x3 replicates edges, hand-checked 3x3", "[preprocess]") {
    // Center window is the whole image; corner windows replicate the corner
    // pixel four times and its edge neighbors twice each.
    GrayImage img(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const GrayImage f = median3x3(img);
    CHECK(f.at(1, 1) == 5);
    // Window at (0,0): {1,1,2, 1,1,2, 4,4,5} sorted -> 5th is 2.
    CHECK(f.at(0, 0) == 2);
    // Window at (2,2): {5,6,6, 8,9,9, 8,9,9} sorted -> 5th is 8.
    CHECK(f.at(2, 2) == 8);
}

TEST_CASE("median3x3 output values come from the input window", "[preprocess]") {
    std::mt19937 rng(11);
    const GrayImage img = testutil::random_gray(rng, 9, 6);
    const GrayImage f = median3x3(img);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 9; ++x) {
            bool found = false;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, 8);
                    const int sy = std::clamp(y + dy, 0, 5);
                    found = found || img.at(sx, sy) == f.at(x, y);
                }
            }
            REQUIRE(found);
        }
    }
}
