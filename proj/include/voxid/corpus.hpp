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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voxid/audio.hpp"

namespace voxid::corpus {

/// A synthetic "speaker": a stable multi-formant voice profile. Utterances
/// from the same profile share its formant frequencies with small
/// per-utterance detune, amplitude jitter, duration jitter and noise.
struct SpeakerProfile {
    int id = 0;
    std::string name;
    std::vector<double> formants_hz;
    std::vector<double> amplitudes;
    double noise_level = 0.02;
};

struct CorpusOptions {
    std::size_t speakers = 8;
    std::size_t utterances = 20;
    int sample_rate = 22050;
    double duration_s = 0.5;
    std::uint64_t seed = 42;
};

struct ManifestEntry {
    int label = 0;
    std::string path;
};

/// Deterministic per-seed speaker profiles. Formant bases are spread on a
/// per-speaker grid so every seed yields mutually distinct voices.
std::vector<SpeakerProfile> make_profiles(std::size_t count, std::uint64_t seed);

/// One utterance of the given profile, reproducible from
/// (seed, speaker id, utterance index) alone.
audio::AudioClip render_utterance(const SpeakerProfile& profile,
                                  std::size_t utterance_index,
                                  const CorpusOptions& options);

/// Writes `speakers * utterances` WAV files plus manifest.csv (header
/// `label,path`, paths relative to the manifest) into out_dir, which must
/// already exist.
std::vector<ManifestEntry> generate_corpus(const std::string& out_dir,
                                           const CorpusOptions& options);

/// Parses a `label,path` manifest; relative paths are resolved against the
/// manifest's own directory.
std::vector<ManifestEntry> read_manifest(const std::string& manifest_path);

}  // namespace voxid::corpus
