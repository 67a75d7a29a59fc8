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
#include <span>
#include <vector>

#include "voxid/audio.hpp"

namespace voxid::mfcc {

/// Front-end parameters for the cepstral analysis chain.
///
/// num_coeffs must stay below num_filters: the cepstral coefficient at
/// index n = K vanishes identically under the DCT used here, so a bank of
/// K filters yields at most K-1 informative coefficients.
struct MfccConfig {
    int sample_rate = 22050;
    std::size_t fft_size = 1024;
    int num_filters = 20;   ///< K, triangular mel filters
    double f_low = 0.0;     ///< Hz
    double f_high = 11025;  ///< Hz, defaults to Nyquist
    int num_coeffs = 19;    ///< cepstral coefficients c1..c_n
    double log_floor = 1e-10;

    /// Throws if any invariant is violated (power-of-two FFT size, band
    /// limits inside [0, Nyquist], coefficient count within 1..K-1).
    void validate() const;
};

/// Perceptual pitch in mels for a frequency in Hz:
/// mel(f) = 2595 log10(1 + f/700). Strictly increasing; mel(1000) ~ 1000.
double hz_to_mel(double hz);

/// Exact inverse of hz_to_mel: 700 (10^(m/2595) - 1).
double mel_to_hz(double mel);

/// One triangular bandpass filter, peak weight exactly 1.0 at its center
/// bin, supported on a contiguous bin range [start_bin, start_bin + size).
struct MelFilter {
    std::size_t start_bin = 0;
    std::vector<double> weights;
    double center_hz = 0.0;  ///< continuous center frequency (pre-rounding)
};

/// Triangular filterbank with centers equally spaced on the mel axis
/// between mel(f_low) and mel(f_high).
struct MelFilterBank {
    std::vector<MelFilter> filters;
    std::size_t bin_count = 0;  ///< fft_size/2 + 1
    MfccConfig config;
};

/// |X[k]|^2 for k = 0..fft_size/2 of the zero-padded frame, via the
/// in-repo radix-2 FFT. Throws FrameTooLong or NonPowerOfTwo.
std::vector<double> power_spectrum(std::span<const double> windowed_frame,
                                   std::size_t fft_size);

/// Builds the triangular mel filterbank. The K+2 band edges are equally
/// spaced in mel and snapped to FFT bin centers; adjacent edges landing on
/// the same bin raise DegenerateBank.
MelFilterBank build_filterbank(const MfccConfig& config);

/// Log mel energies: log(max(sum_b weight_b * power_b, log_floor)) per
/// filter, natural log. Throws LengthMismatch when the spectrum size does
/// not match the bank.
std::vector<double> apply_filterbank(std::span<const double> spectrum,
                                     const MelFilterBank& bank,
                                     double log_floor);

/// One frame's cepstral coefficients c1..c_num_coeffs.
struct AcousticVector {
    std::vector<double> coeffs;
};

/// c_n = sum_{k=1..K} E_k cos(n (k - 1/2) pi / K) for n = 1..num_coeffs.
/// c_0 is never emitted. Uses a precomputed cosine table.
AcousticVector dct_cepstrum(std::span<const double> log_energies,
                            int num_coeffs);

/// Full chain: frame -> Hamming window -> power spectrum -> mel filterbank
/// -> log -> DCT cepstrum. One AcousticVector per frame, in frame order.
/// Throws SampleRateMismatch if the clip rate differs from the config.
std::vector<AcousticVector> mfcc_pipeline(const audio::AudioClip& clip,
                                          const MfccConfig& config,
                                          double frame_ms, double hop_ms);

}  // namespace voxid::mfcc
