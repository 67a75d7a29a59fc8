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

#include <string>

#include "voxid/mfcc.hpp"

namespace voxid {

/// Everything the front end needs to turn a WAV file into features:
/// cepstral parameters plus the framing grid. Persisted inside model files
/// so identification always replays the training-time preprocessing.
struct ExtractionConfig {
    mfcc::MfccConfig mfcc;
    double frame_ms = 30.0;
    double hop_ms = 10.0;

    void validate() const;
};

/// Parses a key=value text file ('#' starts a comment). Recognized keys:
/// sample_rate, fft_size, num_filters, f_low, f_high, num_coeffs,
/// log_floor, frame_ms, hop_ms. f_high defaults to the Nyquist frequency
/// of the configured rate when not given. Throws BadConfig on unknown keys
/// or unparseable values.
ExtractionConfig load_config_file(const std::string& path);

}  // namespace voxid
