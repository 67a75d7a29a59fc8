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

#include "voxid/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "voxid/errors.hpp"
#include "voxid/fft.hpp"

namespace voxid::mfcc {

void MfccConfig::validate() const {
    if (sample_rate <= 0) throw BadConfig("sample_rate must be positive");
    if (!dsp::is_power_of_two(fft_size))
        throw NonPowerOfTwo("fft_size " + std::to_string(fft_size) +
                            " is not a power of two");
    if (num_filters < 2) throw BadConfig("need at least 2 mel filters");
    if (f_low < 0.0 || f_low >= f_high || f_high > sample_rate / 2.0)
        throw BadConfig("band limits must satisfy 0 <= f_low < f_high <= rate/2");
    if (num_coeffs < 1 || num_coeffs > num_filters - 1)
        throw BadCoeffCount("num_coeffs must lie in [1, num_filters-1], got " +
                            std::to_string(num_coeffs));
    if (log_floor <= 0.0) throw BadConfig("log_floor must be positive");
}

double hz_to_mel(double hz) {
    if (hz < 0.0) throw NegativeFrequency("negative frequency " + std::to_string(hz));
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
    if (mel < 0.0) throw NegativeMel("negative mel value " + std::to_string(mel));
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> power_spectrum(std::span<const double> windowed_frame,
                                   std::size_t fft_size) {
    if (!dsp::is_power_of_two(fft_size))
        throw NonPowerOfTwo("fft_size " + std::to_string(fft_size) +
                            " is not a power of two");
    if (windowed_frame.size() > fft_size)
        throw FrameTooLong("frame of " + std::to_string(windowed_frame.size()) +
                           " samples exceeds fft_size " +
                           std::to_string(fft_size));

    std::vector<std::complex<double>> buf(fft_size);
    for (std::size_t i = 0; i < windowed_frame.size(); ++i)
        buf[i] = windowed_frame[i];
    dsp::fft_inplace(buf);

    std::vector<double> power(fft_size / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
    return power;
}

MelFilterBank build_filterbank(const MfccConfig& config) {
    config.validate();
    const int k_filters = config.num_filters;
    const double mel_lo = hz_to_mel(config.f_low);
    const double mel_hi = hz_to_mel(config.f_high);
    const double mel_step = (mel_hi - mel_lo) / (k_filters + 1);

    // K+2 band edges, equally spaced in mel, snapped to FFT bin centers.
    std::vector<std::size_t> edge_bins(k_filters + 2);
    std::vector<double> edge_hz(k_filters + 2);
    const double hz_per_bin = double(config.sample_rate) / double(config.fft_size);
    for (int e = 0; e < k_filters + 2; ++e) {
        edge_hz[e] = mel_to_hz(mel_lo + mel_step * e);
        edge_bins[e] = std::size_t(std::llround(edge_hz[e] / hz_per_bin));
    }
    for (int e = 0; e + 1 < k_filters + 2; ++e) {
        if (edge_bins[e] >= edge_bins[e + 1])
            throw DegenerateBank("filter edges " + std::to_string(e) + " and " +
                                 std::to_string(e + 1) +
                                 " collapse onto bin " +
                                 std::to_string(edge_bins[e]) +
                                 " at fft_size " + std::to_string(config.fft_size));
    }

    MelFilterBank bank;
    bank.bin_count = config.fft_size / 2 + 1;
    bank.config = config;
    bank.filters.reserve(std::size_t(k_filters));
    for (int f = 0; f < k_filters; ++f) {
        const std::size_t lo = edge_bins[std::size_t(f)];
        const std::size_t mid = edge_bins[std::size_t(f) + 1];
        const std::size_t hi = edge_bins[std::size_t(f) + 2];
        MelFilter filt;
        filt.start_bin = lo;
        filt.center_hz = edge_hz[std::size_t(f) + 1];
        filt.weights.resize(hi - lo + 1, 0.0);
        for (std::size_t b = lo; b <= hi; ++b) {
            const double w = b <= mid ? double(b - lo) / double(mid - lo)
                                      : double(hi - b) / double(hi - mid);
            filt.weights[b - lo] = w;
        }
        bank.filters.push_back(std::move(filt));
    }
    return bank;
}

std::vector<double> apply_filterbank(std::span<const double> spectrum,
                                     const MelFilterBank& bank,
                                     double log_floor) {
    if (spectrum.size() != bank.bin_count)
        throw LengthMismatch("spectrum has " + std::to_string(spectrum.size()) +
                             " bins, bank expects " +
                             std::to_string(bank.bin_count));
    std::vector<double> out(bank.filters.size());
    for (std::size_t f = 0; f < bank.filters.size(); ++f) {
        const MelFilter& filt = bank.filters[f];
        double energy = 0.0;
        for (std::size_t i = 0; i < filt.weights.size(); ++i)
            energy += filt.weights[i] * spectrum[filt.start_bin + i];
        out[f] = std::log(std::max(energy, log_floor));
    }
    return out;
}

namespace {

// cos(n (k - 1/2) pi / K) for n = 1..num_coeffs, k = 1..K, row-major by n.
std::vector<double> dct_table(int k_filters, int num_coeffs) {
    std::vector<double> table(std::size_t(num_coeffs) * std::size_t(k_filters));
    for (int n = 1; n <= num_coeffs; ++n)
        for (int k = 1; k <= k_filters; ++k)
            table[std::size_t(n - 1) * std::size_t(k_filters) + std::size_t(k - 1)] =
                std::cos(n * (k - 0.5) * std::numbers::pi / k_filters);
    return table;
}

}  // namespace

AcousticVector dct_cepstrum(std::span<const double> log_energies,
                            int num_coeffs) {
    const int k_filters = int(log_energies.size());
    if (num_coeffs < 1 || num_coeffs > k_filters - 1)
        throw BadCoeffCount("num_coeffs " + std::to_string(num_coeffs) +
                            " outside [1, " + std::to_string(k_filters - 1) + "]");
    static thread_local std::vector<double> table;
    static thread_local int table_k = 0, table_n = 0;
    if (table_k != k_filters || table_n < num_coeffs) {
        table = dct_table(k_filters, num_coeffs);
        table_k = k_filters;
        table_n = num_coeffs;
    }

    AcousticVector vec;
    vec.coeffs.resize(std::size_t(num_coeffs));
    for (int n = 1; n <= num_coeffs; ++n) {
        const double* row = table.data() + std::size_t(n - 1) * std::size_t(k_filters);
        double acc = 0.0;
        for (int k = 0; k < k_filters; ++k) acc += log_energies[std::size_t(k)] * row[k];
        vec.coeffs[std::size_t(n - 1)] = acc;
    }
    return vec;
}

std::vector<AcousticVector> mfcc_pipeline(const audio::AudioClip& clip,
                                          const MfccConfig& config,
                                          double frame_ms, double hop_ms) {
    config.validate();
    if (clip.sample_rate != config.sample_rate)
        throw SampleRateMismatch("clip rate " + std::to_string(clip.sample_rate) +
                                 " Hz differs from configured " +
                                 std::to_string(config.sample_rate) + " Hz" +
                                 (clip.source_path.empty() ? ""
                                                           : " (" + clip.source_path + ")"));

    const audio::FrameSequence frames = audio::frame_signal(clip, frame_ms, hop_ms);
    if (frames.frame_len() > config.fft_size)
        throw FrameTooLong("frame of " + std::to_string(frames.frame_len()) +
                           " samples exceeds fft_size " +
                           std::to_string(config.fft_size));
    const audio::HammingWindow window(frames.frame_len());
    const MelFilterBank bank = build_filterbank(config);

    std::vector<AcousticVector> out;
    out.reserve(frames.frame_count());
    std::vector<double> windowed(frames.frame_len());
    for (std::size_t i = 0; i < frames.frame_count(); ++i) {
        window.apply(frames.frame(i), windowed);
        const std::vector<double> power = power_spectrum(windowed, config.fft_size);
        const std::vector<double> energies =
            apply_filterbank(power, bank, config.log_floor);
        out.push_back(dct_cepstrum(energies, config.num_coeffs));
    }
    return out;
}

}  // namespace voxid::mfcc
