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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "voxid/audio.hpp"
#include "voxid/errors.hpp"

using namespace voxid;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("16-bit mono samples normalize by 32768") {
    const std::string path = temp_path("voxid_mono16.wav");
    oracle::write_wav_bytes(path, {{16384, -16384}}, 16, 22050);
    const audio::AudioClip clip = audio::load_wav(path);
    REQUIRE(clip.samples.size() == 2);
    CHECK(clip.samples[0] == doctest::Approx(0.5));
    CHECK(clip.samples[1] == doctest::Approx(-0.5));
    CHECK(clip.sample_rate == 22050);
}

TEST_CASE("stereo channels average to mono") {
    const std::string path = temp_path("voxid_stereo16.wav");
    std::vector<std::int32_t> left(8, 16384), right(8, -16384);
    oracle::write_wav_bytes(path, {left, right}, 16, 22050);
    const audio::AudioClip clip = audio::load_wav(path);
    REQUIRE(clip.samples.size() == 8);
    for (double s : clip.samples) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("one second at 22050 Hz loads 22050 samples") {
    const std::string path = temp_path("voxid_second.wav");
    std::vector<std::int32_t> samples(22050);
    std::mt19937_64 rng(5);
    for (auto& s : samples) s = std::int32_t(rng() % 65536) - 32768;
    oracle::write_wav_bytes(path, {samples}, 16, 22050);
    const audio::AudioClip clip = audio::load_wav(path);
    CHECK(clip.samples.size() == 22050);
}

TEST_CASE("8/24/32-bit depths decode and stay within [-1, 1]") {
    const std::string path = temp_path("voxid_depths.wav");

    oracle::write_wav_bytes(path, {{0, 128, 255}}, 8, 8000);
    audio::AudioClip clip = audio::load_wav(path);
    CHECK(clip.samples[0] == doctest::Approx(-1.0));
    CHECK(clip.samples[1] == doctest::Approx(0.0));
    CHECK(clip.samples[2] == doctest::Approx(127.0 / 128.0));

    oracle::write_wav_bytes(path, {{4194304, -4194304}}, 24, 8000);
    clip = audio::load_wav(path);
    CHECK(clip.samples[0] == doctest::Approx(0.5));
    CHECK(clip.samples[1] == doctest::Approx(-0.5));

    oracle::write_wav_bytes(path, {{1 << 30, -(1 << 30)}}, 32, 8000);
    clip = audio::load_wav(path);
    CHECK(clip.samples[0] == doctest::Approx(0.5));
    CHECK(clip.samples[1] == doctest::Approx(-0.5));

    for (double s : clip.samples) {
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("loader error taxonomy") {
    CHECK_THROWS_AS(audio::load_wav(temp_path("voxid_does_not_exist.wav")),
                    MissingFile);

    const std::string path = temp_path("voxid_bad.wav");
    {
        std::ofstream out(path, std::ios::binary);
        out << "JUNKJUNKJUNKJUNK";
    }
    CHECK_THROWS_AS(audio::load_wav(path), NotRiffWave);

    // Patch a valid file's format tag to 3 (IEEE float).
    oracle::write_wav_bytes(path, {{0, 0}}, 16, 8000);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(20);
        f.put(3);
    }
    CHECK_THROWS_AS(audio::load_wav(path), UnsupportedEncoding);

    // Patch the bit depth to 12.
    oracle::write_wav_bytes(path, {{0, 0}}, 16, 8000);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(34);
        f.put(12);
    }
    CHECK_THROWS_AS(audio::load_wav(path), UnsupportedBitDepth);

    // Truncate the data chunk below its declared size.
    oracle::write_wav_bytes(path, {std::vector<std::int32_t>(100, 0)}, 16, 8000);
    std::filesystem::resize_file(path, 100);
    CHECK_THROWS_AS(audio::load_wav(path), TruncatedData);
}

TEST_CASE("write_wav round trip is lossless within one quantization step") {
    const std::string path = temp_path("voxid_roundtrip.wav");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> samples(977);
    for (double& s : samples) s = uni(rng);

    audio::write_wav(path, samples, 22050);
    const audio::AudioClip clip = audio::load_wav(path);
    REQUIRE(clip.samples.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(std::abs(clip.samples[i] - samples[i]) <= 1.0 / 32768.0);
}

TEST_CASE("framing matches the count law") {
    audio::AudioClip clip;
    clip.sample_rate = 22050;
    clip.samples.assign(22050, 0.0);

    const audio::FrameSequence frames = audio::frame_signal(clip, 30.0, 10.0);
    CHECK(frames.frame_len() == 662);
    CHECK(frames.hop_len() == 221);
    CHECK(frames.frame_count() == 97);

    // Exactly one frame when the signal is one frame long.
    clip.samples.assign(662, 0.0);
    const audio::FrameSequence one = audio::frame_signal(clip, 30.0, 10.0);
    CHECK(one.frame_count() == 1);
    CHECK(one.frame(0).size() == 662);

    clip.samples.assign(661, 0.0);
    CHECK_THROWS_AS(audio::frame_signal(clip, 30.0, 10.0), ClipTooShort);
}

TEST_CASE("framing count law holds for randomized shapes") {
    std::mt19937_64 rng(31337);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t frame_len = 2 + rng() % 400;
        const std::size_t hop_len = 1 + rng() % frame_len;
        const std::size_t n = frame_len + rng() % 5000;

        audio::AudioClip clip;
        clip.sample_rate = 1000;  // 1 ms per sample keeps the math exact
        clip.samples.assign(n, 0.0);
        const audio::FrameSequence frames =
            audio::frame_signal(clip, double(frame_len), double(hop_len));
        CHECK(frames.frame_count() == (n - frame_len) / hop_len + 1);
        CHECK(frames.frame(frames.frame_count() - 1).size() == frame_len);
    }
}

TEST_CASE("frames stride the signal") {
    audio::AudioClip clip;
    clip.sample_rate = 1000;
    clip.samples.resize(100);
    for (std::size_t i = 0; i < 100; ++i) clip.samples[i] = double(i);

    const audio::FrameSequence frames = audio::frame_signal(clip, 10.0, 4.0);
    CHECK(frames.frame(1)[0] == doctest::Approx(4.0));  // starts at hop_len
    CHECK(frames.frame(2)[0] == doctest::Approx(8.0));
    CHECK(frames.frame(0).size() == 10);
}

TEST_CASE("hamming window endpoints and center") {
    std::vector<double> ones(11, 1.0);
    const std::vector<double> w = audio::apply_window(ones);
    CHECK(w.front() == doctest::Approx(0.08));
    CHECK(w.back() == doctest::Approx(0.08));
    CHECK(w[5] == doctest::Approx(1.0));

    const std::vector<double> zeros(16, 0.0);
    for (double v : audio::apply_window(zeros)) CHECK(v == 0.0);
}

TEST_CASE("windowing is homogeneous") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> frame(64), scaled(64);
    for (std::size_t i = 0; i < frame.size(); ++i) {
        frame[i] = gauss(rng);
        scaled[i] = 3.5 * frame[i];
    }
    const auto w1 = audio::apply_window(frame);
    const auto w2 = audio::apply_window(scaled);
    for (std::size_t i = 0; i < frame.size(); ++i)
        CHECK(w2[i] == doctest::Approx(3.5 * w1[i]).epsilon(1e-12));
}
