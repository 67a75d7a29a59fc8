// Copyright 2026 The Voxid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the installed CLI binary end to end through a temp directory:
// gen-corpus -> extract -> train -> identify -> evaluate, plus the error
// and determinism contracts of the command surface.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* path = std::getenv("VOXID_BIN");
    REQUIRE_MESSAGE(path != nullptr, "VOXID_BIN not set");
    return path;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string out_file =
        (fs::temp_directory_path() / "voxid_e2e_cmd_out.txt").string();
    const std::string cmd = bin() + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return {WEXITSTATUS(status), buffer.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const fs::path kWork = fs::temp_directory_path() / "voxid_e2e";

}  // namespace

TEST_CASE("full pipeline through the CLI") {
    fs::remove_all(kWork);
    fs::create_directories(kWork / "corpus");

    RunResult r = run("gen-corpus --out " + (kWork / "corpus").string() +
                      " --seed 42");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(kWork / "corpus" / "manifest.csv"));
    CHECK(fs::exists(kWork / "corpus" / "spk01_utt00.wav"));

    const std::string manifest = (kWork / "corpus" / "manifest.csv").string();
    const std::string feats = (kWork / "features.csv").string();
    r = run("extract --manifest " + manifest + " --out " + feats);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("160 rows x 38 features") != std::string::npos);

    // Extraction is deterministic: rerun gives a byte-identical CSV.
    const std::string feats2 = (kWork / "features2.csv").string();
    r = run("extract --manifest " + manifest + " --out " + feats2);
    CHECK(r.exit_code == 0);
    CHECK(slurp(feats) == slurp(feats2));

    const std::string model = (kWork / "model.voxid").string();
    r = run("train --data " + feats + " --out " + model + " --solver smo");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("wrote model for 8 speakers") != std::string::npos);

    // Identify a known utterance, both text and JSON outputs.
    const std::string wav = (kWork / "corpus" / "spk05_utt12.wav").string();
    r = run("identify --model " + model + " " + wav);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("speaker 5") != std::string::npos);

    r = run("identify --model " + model + " " + wav + " --json");
    CHECK(r.exit_code == 0);
    const auto parsed = nlohmann::json::parse(r.output);
    CHECK(parsed["speaker_id"] == 5);
    CHECK(parsed["scores"].size() == 8);

    // Evaluate the training data against the model; all labels enrolled.
    const std::string report_csv = (kWork / "report.csv").string();
    r = run("evaluate --model " + model + " --test " + feats + " --csv " +
            report_csv);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Success rate") != std::string::npos);
    CHECK(slurp(report_csv).find("speaker_id,total,correct") == 0);

    // Evaluate from a manifest (features re-extracted via the model config).
    r = run("evaluate --model " + model + " --test " + manifest);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("all") != std::string::npos);
}

TEST_CASE("protocol split trains and scores both solvers") {
    REQUIRE(fs::exists(kWork / "corpus" / "manifest.csv"));
    const RunResult r =
        run("evaluate --protocol --manifest " +
            (kWork / "corpus" / "manifest.csv").string() +
            " --train-frac 0.5 --solvers smo,chunking");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Training algorithm: smo") != std::string::npos);
    CHECK(r.output.find("Training algorithm: chunking") != std::string::npos);
}

TEST_CASE("failures exit nonzero with a diagnostic") {
    RunResult r = run("identify --model " + (kWork / "nope.voxid").string() +
                      " whatever.wav");
    CHECK(r.exit_code != 0);

    // A single-speaker dataset cannot train.
    const std::string lonely = (kWork / "lonely.csv").string();
    {
        std::ofstream out(lonely);
        out << "label,f0\n1,0.5\n1,0.25\n";
    }
    r = run("train --data " + lonely + " --out " + (kWork / "x.voxid").string());
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("speakers") != std::string::npos);

    // A WAV at the wrong rate names the file.
    fs::create_directories(kWork / "badrate");
    r = run("gen-corpus --out " + (kWork / "badrate").string() +
            " --speakers 2 --utterances 1 --sample-rate 16000");
    CHECK(r.exit_code == 0);
    r = run("extract --manifest " +
            (kWork / "badrate" / "manifest.csv").string() + " --out " +
            (kWork / "badrate" / "f.csv").string());
    CHECK(r.exit_code != 0);
    CHECK(r.output.find("16000") != std::string::npos);

    r = run("bench --sizes 50");
    CHECK(r.exit_code != 0);
}

TEST_CASE("--skip-bad downgrades per-file failures to warnings") {
    REQUIRE(fs::exists(kWork / "corpus" / "manifest.csv"));
    // Append a missing file to an otherwise good manifest. It lives next to
    // the original so its relative paths keep resolving.
    const std::string mixed = (kWork / "corpus" / "mixed_manifest.csv").string();
    {
        std::ofstream out(mixed, std::ios::binary);
        out << slurp(kWork / "corpus" / "manifest.csv");
        out << "3,does_not_exist.wav\n";
    }
    RunResult r = run("extract --manifest " + mixed + " --out " +
                      (kWork / "mixed.csv").string());
    CHECK(r.exit_code != 0);

    r = run("extract --manifest " + mixed + " --out " +
            (kWork / "mixed.csv").string() + " --skip-bad");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("warning") != std::string::npos);
    CHECK(r.output.find("160 rows") != std::string::npos);
}

TEST_CASE("config file overrides the front end") {
    REQUIRE(fs::exists(kWork / "corpus" / "manifest.csv"));
    const std::string cfg = (kWork / "frontend.cfg").string();
    {
        std::ofstream out(cfg);
        out << "# front-end overrides\n";
        out << "num_coeffs=12\n";
        out << "frame_ms=25\n";
        out << "hop_ms=10\n";
    }
    const std::string feats = (kWork / "features12.csv").string();
    const RunResult r = run("--config " + cfg + " extract --manifest " +
                            (kWork / "corpus" / "manifest.csv").string() +
                            " --out " + feats);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("24 features") != std::string::npos);  // 2 x 12
}
