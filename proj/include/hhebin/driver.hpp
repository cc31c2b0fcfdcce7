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
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "hhebin/evalmetrics.hpp"
#include "hhebin/hierarchy.hpp"
#include "hhebin/image_io.hpp"
#include "hhebin/otsu.hpp"
#include "hhebin/pixmap.hpp"
#include "hhebin/preprocess.hpp"

// The batch driver behind the command-line tool, kept in the library so the
// whole run is testable in-process. A run converts every input to gray,
// optionally median-filters, binarizes with the configured method, and
// writes suffix-named outputs next to each other in one directory. Failing
// inputs are reported and skipped; the run continues and the exit status
// reflects the failures. Outputs are byte-identical for a given config and
// input set regardless of thread count.

namespace hhebin {

enum class Method { hhe, otsu };
enum class ModePreset { frame, plate, custom };

/// Everything a batch run needs. The frame preset fixes levels 2..8 (full
/// vehicle frames), the plate preset 0..3 (pre-cropped plates); only the
/// custom preset consults the explicit `levels` field.
struct RunConfig {
    Method method = Method::hhe;
    ModePreset mode = ModePreset::frame;
    LevelRange levels{2, 8};
    double threshold = 0.5;
    bool median = true;
    bool compare = false;
    bool dump_levels = false;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out_dir = ".";
    std::filesystem::path truth_dir;     // empty: no scoring
    std::filesystem::path metrics_path;  // empty: metric rows go to `out`
    int threads = 0;                     // 0: one per hardware thread
};

inline LevelRange effective_levels(const RunConfig& cfg) {
    switch (cfg.mode) {
        case ModePreset::frame:
            return LevelRange(2, 8);
        case ModePreset::plate:
            return LevelRange(0, 3);
        case ModePreset::custom:
            break;
    }
    return cfg.levels;
}

namespace detail {

inline bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

// Truth masks and the tool's own products are not inputs; skipping them in
// directory scans lets a corpus directory be passed as-is and keeps reruns
// from re-binarizing earlier outputs. Explicit file arguments always pass.
inline bool is_derived_stem(const std::string& stem) {
    for (const char* suffix : {".truth", ".bin", ".otsu", ".panel"}) {
        const std::string_view sv(suffix);
        if (stem.size() > sv.size() &&
            stem.compare(stem.size() - sv.size(), sv.size(), sv) == 0) {
            return true;
        }
    }
    const std::size_t dot = stem.rfind('.');
    if (dot != std::string::npos && dot + 2 <= stem.size() &&
        stem[dot + 1] == 'L') {
        bool digits = dot + 2 < stem.size();
        for (std::size_t i = dot + 2; i < stem.size(); ++i) {
            digits = digits && std::isdigit(static_cast<unsigned char>(stem[i]));
        }
        if (digits) return true;
    }
    return false;
}

// Expands directories to their image files (sorted, for deterministic
// ordering); plain paths pass through whether or not they exist, so missing
// files surface as per-file errors in input order.
inline std::vector<std::filesystem::path> expand_inputs(
    const std::vector<std::filesystem::path>& inputs) {
    std::vector<std::filesystem::path> files;
    for (const std::filesystem::path& p : inputs) {
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> dir_files;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                if (entry.is_regular_file() && has_image_extension(entry.path()) &&
                    !is_derived_stem(entry.path().stem().string())) {
                    dir_files.push_back(entry.path());
                }
            }
            std::sort(dir_files.begin(), dir_files.end());
            files.insert(files.end(), dir_files.begin(), dir_files.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

// "0001.gray" -> "0001"; the corpus generator names pairs NNNN.gray.pgm /
// NNNN.truth.pgm, so scoring strips the .gray layer before looking up truth.
inline std::string truth_stem(const std::string& stem) {
    constexpr std::string_view suffix = ".gray";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return stem.substr(0, stem.size() - suffix.size());
    }
    return stem;
}

inline GrayImage as_gray(LoadedImage&& img) {
    if (std::holds_alternative<RgbImage>(img)) {
        return to_gray(std::get<RgbImage>(img));
    }
    return std::move(std::get<GrayImage>(img));
}

// Gray | HHE | Otsu, concatenated horizontally at equal heights.
inline GrayImage make_panel(const GrayImage& gray, const BinaryImage& hhe,
                            const BinaryImage& otsu) {
    const int w = gray.width();
    const int h = gray.height();
    std::vector<std::uint8_t> panel(std::size_t(3) * w * h);
    for (int y = 0; y < h; ++y) {
        std::uint8_t* dst = panel.data() + std::size_t(y) * 3 * w;
        std::copy_n(gray.pixels().data() + std::size_t(y) * w, w, dst);
        std::copy_n(hhe.pixels().data() + std::size_t(y) * w, w, dst + w);
        std::copy_n(otsu.pixels().data() + std::size_t(y) * w, w, dst + 2 * w);
    }
    return GrayImage(3 * w, h, std::move(panel));
}

struct FileResult {
    bool ok = false;
    std::string error;
    std::vector<std::string> csv_rows;
};

inline FileResult process_one(const RunConfig& cfg, const LevelRange& range,
                              const std::filesystem::path& input) {
    FileResult res;
    try {
        const GrayImage gray = as_gray(load_image(input));
        const GrayImage pre = cfg.median ? median3x3(gray) : gray;

        const bool want_hhe = cfg.method == Method::hhe || cfg.compare;
        const bool want_otsu = cfg.method == Method::otsu || cfg.compare;
        const std::string stem = input.stem().string();

        std::optional<BinaryImage> hhe_out;
        if (want_hhe) {
            const LevelStack stack = build_level_stack(pre, range);
            if (cfg.dump_levels) {
                for (int level = stack.lmin(); level <= stack.lmax(); ++level) {
                    save_image(stack.at_level(level),
                               cfg.out_dir /
                                   (stem + ".L" + std::to_string(level) + ".pgm"));
                }
            }
            hhe_out = binarize(combine(stack), cfg.threshold);
        }
        std::optional<BinaryImage> otsu_out;
        if (want_otsu) {
            otsu_out = otsu_binarize(pre);
        }

        const BinaryImage& primary =
            cfg.method == Method::hhe ? *hhe_out : *otsu_out;
        save_image(primary, cfg.out_dir / (stem + ".bin.png"));
        if (cfg.compare) {
            save_image(*otsu_out, cfg.out_dir / (stem + ".otsu.png"));
            save_image(make_panel(gray, *hhe_out, *otsu_out),
                       cfg.out_dir / (stem + ".panel.png"));
        }

        if (!cfg.truth_dir.empty()) {
            const std::filesystem::path truth_path =
                cfg.truth_dir / (truth_stem(stem) + ".truth.pgm");
            const BinaryImage truth =
                binary_from_gray(std::get<GrayImage>(load_image(truth_path)));
            const std::string levels_label =
                std::to_string(range.lmin()) + ".." + std::to_string(range.lmax());
            if (hhe_out) {
                res.csv_rows.push_back(
                    metrics_csv_row(input.filename().string(), "hhe",
                                    levels_label, scores(confusion(*hhe_out, truth))));
            }
            if (otsu_out) {
                res.csv_rows.push_back(
                    metrics_csv_row(input.filename().string(), "otsu", "-",
                                    scores(confusion(*otsu_out, truth))));
            }
        }
        res.ok = true;
    } catch (const std::exception& e) {
        res.error = input.string() + ": " + e.what();
    }
    return res;
}

}  // namespace detail

/// Executes a batch run. Returns 0 when every input processed cleanly, 1
/// when any input failed (the rest are still processed). An unusable output
/// directory or metrics file throws io_error instead, since nothing useful
/// can proceed.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) {
        throw std::invalid_argument("run: threshold must be in [0,1]");
    }
    const LevelRange range = effective_levels(cfg);

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (!std::filesystem::is_directory(cfg.out_dir)) {
        throw io_error("output directory " + cfg.out_dir.string() +
                       " cannot be created");
    }

    const std::vector<std::filesystem::path> files =
        detail::expand_inputs(cfg.inputs);
    std::vector<detail::FileResult> results(files.size());

    unsigned n_threads = cfg.threads > 0
                             ? static_cast<unsigned>(cfg.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads,
                                   std::max<std::size_t>(files.size(), 1));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) {
            results[i] = detail::process_one(cfg, range, files[i]);
        }
    } else {
        // Each worker owns the result slot of the index it claims, so no
        // synchronization beyond the claim counter is needed.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < files.size();
                     i = next.fetch_add(1)) {
                    results[i] = detail::process_one(cfg, range, files[i]);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }

    int failures = 0;
    for (const detail::FileResult& r : results) {
        if (!r.ok) {
            ++failures;
            err << "hhebin: " << r.error << '\n';
        }
    }

    if (!cfg.truth_dir.empty()) {
        std::ofstream metrics_file;
        std::ostream* rows_out = &out;
        if (!cfg.metrics_path.empty()) {
            metrics_file.open(cfg.metrics_path, std::ios::trunc);
            if (!metrics_file) {
                throw io_error("cannot open metrics file " +
                               cfg.metrics_path.string());
            }
            rows_out = &metrics_file;
        }
        *rows_out << metrics_csv_header << '\n';
        for (const detail::FileResult& r : results) {
            for (const std::string& row : r.csv_rows) {
                *rows_out << row << '\n';
            }
        }
        rows_out->flush();
        if (!*rows_out) {
            throw io_error("error writing metrics");
        }
    }

    return failures == 0 ? 0 : 1;
}

/// Parameters for generating a ground-truthed corpus: per-image degradation
/// values are drawn uniformly from the closed ranges below, seeded once, so
/// a (config, seed) pair always yields the same corpus.
struct SynthConfig {
    int count = 20;
    int width = 128;
    int height = 64;
    std::uint64_t seed = 1;
    int amp_min = 140;
    int amp_max = 220;
    double rate_min = 0.005;
    double rate_max = 0.03;
    int blur_min = 0;
    int blur_max = 1;
    std::filesystem::path out_dir = ".";
};

/// Writes `count` pairs NNNN.gray.pgm + NNNN.truth.pgm into out_dir.
inline void synth_corpus(const SynthConfig& cfg) {
    if (cfg.count < 0) {
        throw std::invalid_argument("synth_corpus: count must be >= 0");
    }
    if (cfg.amp_min > cfg.amp_max || cfg.rate_min > cfg.rate_max ||
        cfg.blur_min > cfg.blur_max) {
        throw std::invalid_argument("synth_corpus: empty degradation range");
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (!std::filesystem::is_directory(cfg.out_dir)) {
        throw io_error("output directory " + cfg.out_dir.string() +
                       " cannot be created");
    }
    Lcg64 rng(cfg.seed);
    for (int i = 0; i < cfg.count; ++i) {
        DegradationSpec spec;
        spec.ramp_amplitude = rng.next_int(cfg.amp_min, cfg.amp_max);
        spec.salt_pepper_rate =
            cfg.rate_min + rng.next_double() * (cfg.rate_max - cfg.rate_min);
        spec.blur_radius = rng.next_int(cfg.blur_min, cfg.blur_max);
        const std::uint64_t seed_hi = rng.next_u32();
        const std::uint64_t seed_lo = rng.next_u32();
        spec.seed = (seed_hi << 32) | seed_lo;
        const SynthPlate plate = synth_plate(spec, cfg.width, cfg.height);
        char name[16];
        std::snprintf(name, sizeof(name), "%04d", i);
        save_image(plate.gray,
                   cfg.out_dir / (std::string(name) + ".gray.pgm"));
        save_image(plate.truth,
                   cfg.out_dir / (std::string(name) + ".truth.pgm"));
    }
}

}  // namespace hhebin
