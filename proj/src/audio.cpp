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

#include "voxid/audio.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "voxid/errors.hpp"
#include "voxid/kernels.hpp"

namespace voxid::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
    return std::uint16_t(p[0] | p[1] << 8);
}

// Decodes one little-endian PCM sample to a double in [-1, 1].
// 8-bit WAV samples are unsigned and centered at 128; wider ones are
// signed two's complement.
double decode_sample(const unsigned char* p, int bits) {
    switch (bits) {
        case 8:
            return (int(p[0]) - 128) / 128.0;
        case 16: {
            std::int16_t v = std::int16_t(p[0] | p[1] << 8);
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case 32: {
            std::int32_t v = std::int32_t(read_u32(p));
            return v / 2147483648.0;
        }
        default:
            return 0.0;
    }
}

}  // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("cannot open WAV file: " + path);

    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()};
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw NotRiffWave("not a RIFF/WAVE file: " + path);
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        const std::uint32_t chunk_size = read_u32(hdr + 4);
        const std::size_t body = pos + 8;

        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (body + 16 > bytes.size())
                throw TruncatedData("fmt chunk truncated: " + path);
            const unsigned char* f = bytes.data() + body;
            const std::uint16_t tag = read_u16(f);
            if (tag != kFormatPcm)
                throw UnsupportedEncoding("WAV format tag " + std::to_string(tag) +
                                          " is not integer PCM: " + path);
            channels = read_u16(f + 2);
            rate = read_u32(f + 4);
            bits = read_u16(f + 14);
            if (bits != 8 && bits != 16 && bits != 24 && bits != 32)
                throw UnsupportedBitDepth(std::to_string(bits) +
                                          "-bit PCM is not supported: " + path);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            if (body + chunk_size > bytes.size())
                throw TruncatedData("data chunk declares " +
                                    std::to_string(chunk_size) + " bytes but " +
                                    std::to_string(bytes.size() - body) +
                                    " remain: " + path);
            data = bytes.data() + body;
            data_size = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw TruncatedData("missing fmt or data chunk: " + path);
    if (channels == 0 || rate == 0)
        throw UnsupportedEncoding("WAV declares zero channels or zero rate: " + path);

    const std::size_t bytes_per_sample = bits / 8u;
    const std::size_t stride = bytes_per_sample * channels;
    const std::size_t n_frames = data_size / stride;

    AudioClip clip;
    clip.sample_rate = int(rate);
    clip.source_path = path;
    clip.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        const unsigned char* frame = data + i * stride;
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c)
            acc += decode_sample(frame + c * bytes_per_sample, bits);
        clip.samples[i] = acc / channels;
    }
    return clip;
}

void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);

    const std::uint32_t data_size = std::uint32_t(samples.size() * 2);
    auto put_u32 = [&](std::uint32_t v) {
        char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
        out.write(b, 4);
    };
    auto put_u16 = [&](std::uint16_t v) {
        char b[2] = {char(v), char(v >> 8)};
        out.write(b, 2);
    };

    out.write("RIFF", 4);
    put_u32(36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);  // mono
    put_u32(std::uint32_t(sample_rate));
    put_u32(std::uint32_t(sample_rate) * 2);
    put_u16(2);   // block align
    put_u16(16);  // bits
    out.write("data", 4);
    put_u32(data_size);
    for (double s : samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const auto q = std::int32_t(std::lround(clamped * 32768.0));
        const auto v = std::int16_t(std::clamp(q, -32768, 32767));
        put_u16(std::uint16_t(v));
    }
    if (!out) throw IoFailure("write failed: " + path);
}

FrameSequence::FrameSequence(std::vector<double> signal, std::size_t frame_len,
                             std::size_t hop_len, int sample_rate)
    : signal_(std::move(signal)),
      frame_len_(frame_len),
      hop_len_(hop_len),
      sample_rate_(sample_rate) {
    count_ = signal_.size() >= frame_len_
                 ? (signal_.size() - frame_len_) / hop_len_ + 1
                 : 0;
}

std::span<const double> FrameSequence::frame(std::size_t i) const {
    if (i >= count_) throw IndexOutOfRange("frame index out of range");
    return std::span<const double>(signal_).subspan(i * hop_len_, frame_len_);
}

FrameSequence frame_signal(const AudioClip& clip, double frame_ms,
                           double hop_ms) {
    const auto frame_len =
        std::size_t(std::llround(frame_ms * clip.sample_rate / 1000.0));
    const auto hop_len =
        std::size_t(std::llround(hop_ms * clip.sample_rate / 1000.0));
    if (frame_len == 0 || hop_len == 0 || hop_len > frame_len)
        throw BadConfig("need 0 < hop_ms <= frame_ms");
    if (clip.samples.size() < frame_len)
        throw ClipTooShort("clip has " + std::to_string(clip.samples.size()) +
                           " samples, one frame needs " +
                           std::to_string(frame_len));
    return FrameSequence(clip.samples, frame_len, hop_len, clip.sample_rate);
}

HammingWindow::HammingWindow(std::size_t length) : coeffs_(length) {
    assert(length >= 2);
    for (std::size_t i = 0; i < length; ++i) {
        coeffs_[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * double(i) /
                                            double(length - 1));
    }
}

std::vector<double> HammingWindow::apply(std::span<const double> frame) const {
    std::vector<double> out(frame.size());
    apply(frame, out);
    return out;
}

void HammingWindow::apply(std::span<const double> frame,
                          std::span<double> out) const {
    kernels::multiply(frame, coeffs_, out);
}

std::vector<double> apply_window(std::span<const double> frame) {
    return HammingWindow(frame.size()).apply(frame);
}

}  // namespace voxid::audio
