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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hhebin/driver.hpp"
#include "testutil.hpp"

using namespace hhebin;
using testutil::TempDir;

namespace {

std::string read_text(const std::filesystem::path& p) {
    const std::vector<std::uint8_t> bytes = testutil::slurp(p);
    return std::string(bytes.begin(), bytes.end());
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// A tiny corpus shared by the run() tests.
void make_corpus(const std::filesystem::path& dir, int count) {
    SynthConfig cfg;
    cfg.count = count;
    cfg.width = 64;
    cfg.height = 32;
    cfg.seed = 77;
    cfg.out_dir = dir;
    synth_corpus(cfg);
}

}  // namespace

TEST_CASE("effective_levels honors the presets", "[driver]") {
    RunConfig cfg;
    cfg.mode = ModePreset::frame;
    CHECK(effective_levels(cfg) == LevelRange(2, 8));
    cfg.mode = ModePreset::plate;
    CHECK(effective_levels(cfg) == LevelRange(0, 3));
    cfg.mode = ModePreset::custom;
    cfg.levels = LevelRange(1, 4);
    CHECK(effective_levels(cfg) == LevelRange(1, 4));
}

TEST_CASE("truth masks and tool outputs are skipped in directory scans",
          "[driver]") {
    CHECK(detail::truth_stem("0001.gray") == "0001");
    CHECK(detail::truth_stem("plain") == "plain");
    CHECK(detail::is_derived_stem("0001.truth"));
    CHECK(detail::is_derived_stem("img.bin"));
    CHECK(detail::is_derived_stem("img.otsu"));
    CHECK(detail::is_derived_stem("img.panel"));
    CHECK(detail::is_derived_stem("img.L3"));
    CHECK(detail::is_derived_stem("img.L12"));
    CHECK_FALSE(detail::is_derived_stem("0001.gray"));
    CHECK_FALSE(detail::is_derived_stem("img.Lx"));
    CHECK_FALSE(detail::is_derived_stem("img.L"));
    CHECK_FALSE(detail::is_derived_stem("Lemon"));
}

TEST_CASE("synth_corpus writes deterministic pairs", "[driver]") {
    TempDir a;
    TempDir b;
    make_corpus(a.path, 3);
    make_corpus(b.path, 3);
    for (const char* name :
         {"0000.gray.pgm", "0000.truth.pgm", "0002.gray.pgm", "0002.truth.pgm"}) {
        CAPTURE(name);
        REQUIRE(std::filesystem::exists(a / name));
        REQUIRE(testutil::slurp(a / name) == testutil::slurp(b / name));
    }
    CHECK_FALSE(std::filesystem::exists(a / "0003.gray.pgm"));
}

TEST_CASE("run binarizes a corpus and scores it", "[driver]") {
    TempDir corpus;
    TempDir out;
    make_corpus(corpus.path, 3);

    RunConfig cfg;
    cfg.mode = ModePreset::plate;
    cfg.compare = true;
    cfg.inputs = {corpus.path};
    cfg.out_dir = out.path;
    cfg.truth_dir = corpus.path;
    cfg.metrics_path = out / "metrics.csv";
    cfg.threads = 1;

    std::ostringstream log;
    REQUIRE(run(cfg, log, log) == 0);

    for (const char* name : {"0000.gray.bin.png", "0000.gray.otsu.png",
                             "0000.gray.panel.png", "0002.gray.bin.png"}) {
        CAPTURE(name);
        REQUIRE(std::filesystem::exists(out / name));
    }

    // Panel is three tiles wide.
    const GrayImage panel =
        std::get<GrayImage>(load_image(out / "0000.gray.panel.png"));
    CHECK(panel.width() == 3 * 64);
    CHECK(panel.height() == 32);

    const std::vector<std::string> lines =
        split_lines(read_text(out / "metrics.csv"));
    REQUIRE(lines.size() == 7);  // header + (hhe + otsu) x 3 inputs
    CHECK(lines[0] == metrics_csv_header);
    CHECK(lines[1].rfind("0000.gray.pgm,hhe,0..3,", 0) == 0);
    CHECK(lines[2].rfind("0000.gray.pgm,otsu,-,", 0) == 0);
    CHECK(lines[5].rfind("0002.gray.pgm,hhe,0..3,", 0) == 0);
}

TEST_CASE("run output is identical across thread counts", "[driver]") {
    TempDir corpus;
    make_corpus(corpus.path, 4);

    const auto run_with = [&](int threads, const TempDir& out) {
        RunConfig cfg;
        cfg.mode = ModePreset::plate;
        cfg.compare = true;
        cfg.inputs = {corpus.path};
        cfg.out_dir = out.path;
        cfg.truth_dir = corpus.path;
        cfg.metrics_path = out / "metrics.csv";
        cfg.threads = threads;
        std::ostringstream log;
        REQUIRE(run(cfg, log, log) == 0);
    };

    TempDir serial;
    TempDir parallel;
    run_with(1, serial);
    run_with(4, parallel);

    for (const char* name : {"0000.gray.bin.png", "0001.gray.otsu.png",
                             "0003.gray.panel.png", "metrics.csv"}) {
        CAPTURE(name);
        REQUIRE(testutil::slurp(serial / name) ==
                testutil::slurp(parallel / name));
    }
}

TEST_CASE("run continues past bad inputs and reports failure", "[driver]") {
    TempDir corpus;
    TempDir out;
    make_corpus(corpus.path, 1);

    RunConfig cfg;
    cfg.mode = ModePreset::plate;
    cfg.inputs = {corpus / "missing.pgm", corpus / "0000.gray.pgm"};
    cfg.out_dir = out.path;
    cfg.threads = 1;

    std::ostringstream log;
    CHECK(run(cfg, log, log) == 1);
    CHECK(std::filesystem::exists(out / "0000.gray.bin.png"));
    CHECK(log.str().find("missing.pgm") != std::string::npos);
}

TEST_CASE("run handles a constant image via the otsu method", "[driver]") {
    TempDir in;
    TempDir out;
    save_image(GrayImage(16, 16, std::vector<std::uint8_t>(256, 42)),
               in / "flat.pgm");

    RunConfig cfg;
    cfg.method = Method::otsu;
    cfg.inputs = {in / "flat.pgm"};
    cfg.out_dir = out.path;
    cfg.threads = 1;

    std::ostringstream log;
    REQUIRE(run(cfg, log, log) == 0);
    const BinaryImage result = binary_from_gray(
        std::get<GrayImage>(load_image(out / "flat.bin.png")));
    for (std::uint8_t v : result.pixels()) REQUIRE(v == BinaryImage::black);
}

TEST_CASE("dump-levels writes one map per level", "[driver]") {
    TempDir in;
    TempDir out;
    make_corpus(in.path, 1);

    RunConfig cfg;
    cfg.mode = ModePreset::custom;
    cfg.levels = LevelRange(1, 2);
    cfg.dump_levels = true;
    cfg.inputs = {in / "0000.gray.pgm"};
    cfg.out_dir = out.path;
    cfg.threads = 1;

    std::ostringstream log;
    REQUIRE(run(cfg, log, log) == 0);
    CHECK(std::filesystem::exists(out / "0000.gray.L1.pgm"));
    CHECK(std::filesystem::exists(out / "0000.gray.L2.pgm"));
    CHECK_FALSE(std::filesystem::exists(out / "0000.gray.L0.pgm"));
}

TEST_CASE("color inputs are converted before binarization", "[driver]") {
    TempDir in;
    TempDir out;
    // A P6 color image: left pixel dark, right pixel bright.
    std::vector<std::uint8_t> data = {'P', '6', '\n', '2', ' ', '1', '\n',
                                      '2', '5', '5', '\n',
                                      10, 10, 10, 240, 240, 240};
    detail::write_file(in / "color.ppm", data);

    RunConfig cfg;
    cfg.method = Method::otsu;
    cfg.median = false;
    cfg.inputs = {in / "color.ppm"};
    cfg.out_dir = out.path;
    cfg.threads = 1;

    std::ostringstream log;
    REQUIRE(run(cfg, log, log) == 0);
    const GrayImage result =
        std::get<GrayImage>(load_image(out / "color.bin.png"));
    CHECK(result.pixels() == std::vector<std::uint8_t>{0, 255});
}

// ---------------------------------------------------------------------------
// End-to-end through the real executable.

#ifdef HHEBIN_CLI_PATH

#include <sys/wait.h>

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HHEBIN_CLI_PATH) + " " + args +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli: synth then binarize with metrics", "[driver][cli]") {
    TempDir corpus;
    TempDir out;
    REQUIRE(run_cli("synth --count 2 --width 64 --height 32 --seed 5 --out " +
                    corpus.path.string()) == 0);
    REQUIRE(std::filesystem::exists(corpus / "0001.truth.pgm"));

    const auto metrics = out / "metrics.csv";
    REQUIRE(run_cli("--mode plate --compare --truth " + corpus.path.string() +
                    " --metrics " + metrics.string() + " --out " +
                    out.path.string() + " " + corpus.path.string()) == 0);
    CHECK(std::filesystem::exists(out / "0000.gray.bin.png"));
    CHECK(std::filesystem::exists(out / "0001.gray.panel.png"));
    const std::vector<std::string> lines = split_lines(read_text(metrics));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == metrics_csv_header);
}

TEST_CASE("cli: custom mode requires explicit levels", "[driver][cli]") {
    TempDir in;
    make_corpus(in.path, 1);
    const std::string input = (in / "0000.gray.pgm").string();
    CHECK(run_cli("--mode custom " + input) != 0);
    CHECK(run_cli("--levels 0..2 " + input) != 0);  // frame mode + --levels
    TempDir out;
    CHECK(run_cli("--mode custom --levels 0..2 --out " + out.path.string() +
                  " " + input) == 0);
    CHECK(std::filesystem::exists(out / "0000.gray.bin.png"));
}

TEST_CASE("cli: bad flags and inputs exit nonzero", "[driver][cli]") {
    CHECK(run_cli("--method sauvola whatever.pgm") != 0);
    CHECK(run_cli("") != 0);  // no inputs
    TempDir out;
    CHECK(run_cli("--out " + out.path.string() + " /nonexistent/x.pgm") == 1);
}

#endif  // HHEBIN_CLI_PATH
