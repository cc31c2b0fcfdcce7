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

// Command-line front end. Two verbs:
//
//   hhebin [flags] INPUT...       binarize images (files or directories)
//   hhebin synth [flags]          generate a ground-truthed synthetic corpus
//
// Level selection: --mode frame (levels 2..8, the default, meant for full
// vehicle frames), --mode plate (levels 0..3, pre-cropped plates), or
// --mode custom with an explicit --levels MIN..MAX. HHEBIN_THREADS caps
// worker threads (0 or unset picks one per hardware thread).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hhebin/hhebin.hpp"

namespace {

int env_threads() {
    const char* raw = std::getenv("HHEBIN_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        const int n = std::stoi(raw);
        return n > 0 ? n : 0;
    } catch (const std::exception&) {
        std::cerr << "hhebin: ignoring unparsable HHEBIN_THREADS='" << raw
                  << "'\n";
        return 0;
    }
}

// "MIN..MAX" or a single "N" -> LevelRange.
hhebin::LevelRange parse_levels(const std::string& text) {
    const std::size_t sep = text.find("..");
    try {
        if (sep == std::string::npos) {
            const int only = std::stoi(text);
            return hhebin::LevelRange(only, only);
        }
        const int lo = std::stoi(text.substr(0, sep));
        const int hi = std::stoi(text.substr(sep + 2));
        return hhebin::LevelRange(lo, hi);
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError("--levels",
                                   "expected MIN..MAX with 0 <= MIN <= MAX <= " +
                                       std::to_string(hhebin::LevelRange::max_level) +
                                       ", got '" + text + "'");
    } catch (const std::out_of_range&) {
        throw CLI::ValidationError("--levels", "level out of range in '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical histogram-equalization binarizer for degraded "
                 "vehicle images, with an Otsu baseline"};
    app.require_subcommand(0, 1);

    // Binarization (the default verb, flags on the main app).
    std::string method = "hhe";
    app.add_option("--method", method, "Binarization method")
        ->check(CLI::IsMember({"hhe", "otsu"}))
        ->capture_default_str();
    std::string mode = "frame";
    app.add_option("--mode", mode,
                   "Level preset: frame = levels 2..8, plate = levels 0..3, "
                   "custom = take --levels")
        ->check(CLI::IsMember({"frame", "plate", "custom"}))
        ->capture_default_str();
    std::string levels_text;
    app.add_option("--levels", levels_text,
                   "Level range MIN..MAX (only with --mode custom)");
    double threshold = 0.5;
    app.add_option("--threshold", threshold,
                   "Net-membership cut; strictly above goes white")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bool no_median = false;
    app.add_flag("--no-median", no_median, "Skip the 3x3 median prefilter");
    bool compare = false;
    app.add_flag("--compare", compare,
                 "Also write the Otsu result and a gray|hhe|otsu panel");
    bool dump_levels = false;
    app.add_flag("--dump-levels", dump_levels,
                 "Write each per-level membership map as <stem>.L<n>.pgm");
    std::string truth_dir;
    app.add_option("--truth", truth_dir,
                   "Directory of NNNN.truth.pgm masks to score against");
    std::string metrics_path;
    app.add_option("--metrics", metrics_path,
                   "Write metric rows to this CSV instead of stdout");
    std::string out_dir = ".";
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    std::vector<std::string> inputs;
    app.add_option("inputs", inputs, "Image files or directories");

    // Corpus generation.
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic ground-truthed plate corpus");
    hhebin::SynthConfig synth_cfg;
    std::string synth_out = ".";
    synth->add_option("--count", synth_cfg.count, "Number of image pairs")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--width", synth_cfg.width, "Image width (>= 32)")
        ->capture_default_str();
    synth->add_option("--height", synth_cfg.height, "Image height (>= 32)")
        ->capture_default_str();
    synth->add_option("--seed", synth_cfg.seed, "Corpus seed")
        ->capture_default_str();
    synth->add_option("--amp-min", synth_cfg.amp_min,
                      "Minimum illumination-ramp amplitude")
        ->capture_default_str();
    synth->add_option("--amp-max", synth_cfg.amp_max,
                      "Maximum illumination-ramp amplitude")
        ->capture_default_str();
    synth->add_option("--rate-min", synth_cfg.rate_min,
                      "Minimum salt-pepper rate")
        ->capture_default_str();
    synth->add_option("--rate-max", synth_cfg.rate_max,
                      "Maximum salt-pepper rate")
        ->capture_default_str();
    synth->add_option("--blur-min", synth_cfg.blur_min, "Minimum blur radius")
        ->capture_default_str();
    synth->add_option("--blur-max", synth_cfg.blur_max, "Maximum blur radius")
        ->capture_default_str();
    synth->add_option("--out", synth_out, "Output directory")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            synth_cfg.out_dir = synth_out;
            hhebin::synth_corpus(synth_cfg);
            return 0;
        }

        if (inputs.empty()) {
            std::cerr << "hhebin: no inputs given (see --help)\n";
            return 2;
        }
        if (mode != "custom" && !levels_text.empty()) {
            std::cerr << "hhebin: --levels requires --mode custom\n";
            return 2;
        }
        if (mode == "custom" && levels_text.empty()) {
            std::cerr << "hhebin: --mode custom requires --levels MIN..MAX\n";
            return 2;
        }

        hhebin::RunConfig cfg;
        cfg.method = method == "hhe" ? hhebin::Method::hhe : hhebin::Method::otsu;
        cfg.mode = mode == "frame"   ? hhebin::ModePreset::frame
                   : mode == "plate" ? hhebin::ModePreset::plate
                                     : hhebin::ModePreset::custom;
        if (cfg.mode == hhebin::ModePreset::custom) {
            cfg.levels = parse_levels(levels_text);
        }
        cfg.threshold = threshold;
        cfg.median = !no_median;
        cfg.compare = compare;
        cfg.dump_levels = dump_levels;
        cfg.truth_dir = truth_dir;
        cfg.metrics_path = metrics_path;
        cfg.out_dir = out_dir;
        cfg.threads = env_threads();
        for (const std::string& in : inputs) cfg.inputs.emplace_back(in);

        return hhebin::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "hhebin: " << e.what() << '\n';
        return 2;
    }
}
