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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace voxid::audio {

/// A mono utterance: samples normalized to [-1, +1] at a fixed rate.
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 0;
    std::string source_path;

    std::size_t size() const { return samples.size(); }
    double duration_seconds() const {
        return sample_rate > 0 ? double(samples.size()) / sample_rate : 0.0;
    }
};

/// Overlapping analysis frames over one signal. Frames are equal-length
/// strided views into a single buffer owned by this object; frame i starts
/// at sample i * hop_len.
class FrameSequence {
public:
    FrameSequence(std::vector<double> signal, std::size_t frame_len,
                  std::size_t hop_len, int sample_rate);

    std::size_t frame_count() const { return count_; }
    std::size_t frame_len() const { return frame_len_; }
    std::size_t hop_len() const { return hop_len_; }
    int sample_rate() const { return sample_rate_; }

    std::span<const double> frame(std::size_t i) const;

private:
    std::vector<double> signal_;
    std::size_t frame_len_;
    std::size_t hop_len_;
    std::size_t count_;
    int sample_rate_;
};

/// Reads a RIFF/WAVE file with uncompressed integer PCM samples
/// (8/16/24/32-bit, any channel count). Channels are averaged to mono and
/// the result is normalized by the bit-depth maximum. The sample rate is
/// taken from the header verbatim; no resampling happens here.
///
/// Throws MissingFile, NotRiffWave, UnsupportedEncoding,
/// UnsupportedBitDepth or TruncatedData.
AudioClip load_wav(const std::string& path);

/// Writes a mono 16-bit PCM WAV file. Samples are clamped to [-1, +1] and
/// quantized; a load_wav round trip recovers them to within one
/// quantization step.
void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate);

/// Cuts a clip into overlapping frames. Frame and hop lengths are
/// round(ms * rate / 1000) samples; trailing samples that do not fill a
/// whole frame are discarded. Throws ClipTooShort when the signal is
/// shorter than one frame.
FrameSequence frame_signal(const AudioClip& clip, double frame_ms,
                           double hop_ms);

/// Hamming window coefficients for one frame length, precomputed so a
/// pipeline over many frames pays the cosines once.
class HammingWindow {
public:
    explicit HammingWindow(std::size_t length);

    std::size_t length() const { return coeffs_.size(); }
    std::span<const double> coefficients() const { return coeffs_; }

    std::vector<double> apply(std::span<const double> frame) const;
    void apply(std::span<const double> frame, std::span<double> out) const;

private:
    std::vector<double> coeffs_;
};

/// frame[i] * (0.54 - 0.46 cos(2 pi i / (L-1))). Requires L >= 2.
std::vector<double> apply_window(std::span<const double> frame);

}  // namespace voxid::audio
