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

#include "voxid/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "voxid/errors.hpp"

namespace voxid::corpus {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<SpeakerProfile> make_profiles(std::size_t count, std::uint64_t seed) {
    std::vector<SpeakerProfile> profiles;
    profiles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed * 7919 + i);
        SpeakerProfile p;
        p.id = int(i) + 1;
        p.name = "speaker-" + std::to_string(p.id);
        // Formant bases walk a per-speaker grid (coprime strides mix the
        // combinations) with a small seeded perturbation on top.
        const double f1 = 280.0 + 62.0 * double(i % count) + uniform(rng, -12, 12);
        const double f2 =
            950.0 + 140.0 * double((i * 3 + 1) % count) + uniform(rng, -25, 25);
        const double f3 =
            2100.0 + 170.0 * double((i * 5 + 2) % count) + uniform(rng, -35, 35);
        p.formants_hz = {f1, f2, f3};
        p.amplitudes = {1.0, uniform(rng, 0.5, 0.8), uniform(rng, 0.3, 0.6)};
        p.noise_level = 0.02 + 0.015 * double(i % 4) + uniform(rng, 0.0, 0.01);
        profiles.push_back(std::move(p));
    }
    return profiles;
}

audio::AudioClip render_utterance(const SpeakerProfile& profile,
                                  std::size_t utterance_index,
                                  const CorpusOptions& options) {
    std::mt19937_64 rng(options.seed * 6364136223846793005ULL +
                        std::uint64_t(profile.id) * 104729 + utterance_index);

    const double duration = options.duration_s * uniform(rng, 0.9, 1.1);
    const std::size_t n = std::size_t(duration * options.sample_rate);

    struct Partial {
        double freq, amp, phase;
    };
    std::vector<Partial> partials;
    for (std::size_t k = 0; k < profile.formants_hz.size(); ++k) {
        Partial part;
        part.freq = profile.formants_hz[k] * (1.0 + uniform(rng, -0.015, 0.015));
        part.amp = profile.amplitudes[k] * uniform(rng, 0.85, 1.15);
        part.phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        partials.push_back(part);
    }
    std::normal_distribution<double> noise(0.0, profile.noise_level);

    audio::AudioClip clip;
    clip.sample_rate = options.sample_rate;
    clip.samples.resize(n);
    const std::size_t attack = n / 10;
    const std::size_t decay = n / 5;
    double peak = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double time = double(t) / options.sample_rate;
        double s = 0.0;
        for (const Partial& part : partials)
            s += part.amp *
                 std::sin(2.0 * std::numbers::pi * part.freq * time + part.phase);
        s += noise(rng);
        double env = 1.0;
        if (t < attack)
            env = 0.5 - 0.5 * std::cos(std::numbers::pi * double(t) / attack);
        else if (t + decay > n)
            env = 0.5 - 0.5 * std::cos(std::numbers::pi * double(n - t) / decay);
        clip.samples[t] = s * env;
        peak = std::max(peak, std::abs(clip.samples[t]));
    }
    if (peak > 0.0)
        for (double& s : clip.samples) s *= 0.6 / peak;
    return clip;
}

std::vector<ManifestEntry> generate_corpus(const std::string& out_dir,
                                           const CorpusOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(out_dir))
        throw IoFailure("output directory does not exist: " + out_dir);

    const std::vector<SpeakerProfile> profiles =
        make_profiles(options.speakers, options.seed);

    std::vector<ManifestEntry> entries;
    std::string manifest = "label,path\n";
    for (const SpeakerProfile& profile : profiles) {
        for (std::size_t u = 0; u < options.utterances; ++u) {
            const audio::AudioClip clip = render_utterance(profile, u, options);
            char name[64];
            std::snprintf(name, sizeof name, "spk%02d_utt%02zu.wav", profile.id, u);
            const std::string path = (fs::path(out_dir) / name).string();
            audio::write_wav(path, clip.samples, clip.sample_rate);
            entries.push_back({profile.id, path});
            manifest += std::to_string(profile.id) + ',' + name + '\n';
        }
    }
    std::ofstream mf(fs::path(out_dir) / "manifest.csv", std::ios::binary);
    if (!mf) throw IoFailure("cannot write manifest in " + out_dir);
    mf << manifest;
    if (!mf) throw IoFailure("manifest write failed in " + out_dir);
    return entries;
}

std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path);
    if (!in) throw MissingFile("cannot open manifest: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();

    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "label,path") continue;  // optional header
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw MalformedCsv(manifest_path + ":" + std::to_string(line_no) +
                               ": expected label,path");
        const std::string label_text = line.substr(0, comma);
        int label = 0;
        const auto [ptr, ec] = std::from_chars(
            label_text.data(), label_text.data() + label_text.size(), label);
        if (ec != std::errc() || ptr != label_text.data() + label_text.size() ||
            label < 1)
            throw MalformedCsv(manifest_path + ":" + std::to_string(line_no) +
                               ": bad label '" + label_text + "'");
        fs::path wav = line.substr(comma + 1);
        if (wav.is_relative()) wav = base / wav;
        entries.push_back({label, wav.string()});
    }
    if (entries.empty())
        throw MalformedCsv(manifest_path + ": no entries");
    return entries;
}

}  // namespace voxid::corpus
