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
#include <optional>
#include <span>
#include <vector>

#include "voxid/mfcc.hpp"

namespace voxid::features {

/// Fixed-length summary of an utterance: per-coefficient mean followed by
/// per-coefficient population standard deviation. Length 2 * num_coeffs,
/// independent of utterance duration.
struct UtteranceFeatures {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

/// Per-dimension affine normalization fitted on a training set. Dimensions
/// with zero spread store a std of 1 so the transform stays defined.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std_dev;

    UtteranceFeatures apply(const UtteranceFeatures& f) const;
    UtteranceFeatures invert(const UtteranceFeatures& f) const;
};

struct LabeledRow {
    UtteranceFeatures features;
    int label = 0;  ///< speaker id, >= 1
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;
    std::size_t feature_dim = 0;
    std::optional<Standardizer> scaler;

    /// Distinct labels in ascending order.
    std::vector<int> labels() const;
};

/// Collapses an utterance's acoustic vectors into mean and population
/// standard deviation per coefficient. Throws EmptyUtterance or
/// RaggedVectors.
UtteranceFeatures summarize(std::span<const mfcc::AcousticVector> vectors);

/// Fits per-dimension mean/std over all rows. Throws EmptyDataset.
Standardizer fit_standardizer(const LabeledDataset& dataset);

/// Convenience: whole front end for one clip (framing, window, spectrum,
/// filterbank, cepstrum, summary).
UtteranceFeatures extract_utterance(const audio::AudioClip& clip,
                                    const mfcc::MfccConfig& config,
                                    double frame_ms, double hop_ms);

}  // namespace voxid::features
