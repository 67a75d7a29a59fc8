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

#include "voxid/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "voxid/errors.hpp"

namespace voxid::features {

UtteranceFeatures Standardizer::apply(const UtteranceFeatures& f) const {
    if (f.dim() != mean.size())
        throw DimensionMismatch("feature dim " + std::to_string(f.dim()) +
                                " vs scaler dim " + std::to_string(mean.size()));
    UtteranceFeatures out;
    out.values.resize(f.dim());
    for (std::size_t i = 0; i < f.dim(); ++i)
        out.values[i] = (f.values[i] - mean[i]) / std_dev[i];
    return out;
}

UtteranceFeatures Standardizer::invert(const UtteranceFeatures& f) const {
    if (f.dim() != mean.size())
        throw DimensionMismatch("feature dim " + std::to_string(f.dim()) +
                                " vs scaler dim " + std::to_string(mean.size()));
    UtteranceFeatures out;
    out.values.resize(f.dim());
    for (std::size_t i = 0; i < f.dim(); ++i)
        out.values[i] = f.values[i] * std_dev[i] + mean[i];
    return out;
}

std::vector<int> LabeledDataset::labels() const {
    std::set<int> distinct;
    for (const LabeledRow& row : rows) distinct.insert(row.label);
    return std::vector<int>(distinct.begin(), distinct.end());
}

UtteranceFeatures summarize(std::span<const mfcc::AcousticVector> vectors) {
    if (vectors.empty()) throw EmptyUtterance("no acoustic vectors to summarize");
    const std::size_t dim = vectors.front().coeffs.size();
    for (const auto& v : vectors) {
        if (v.coeffs.size() != dim)
            throw RaggedVectors("acoustic vectors of length " +
                                std::to_string(v.coeffs.size()) + " and " +
                                std::to_string(dim) + " in one utterance");
    }

    const double n = double(vectors.size());
    UtteranceFeatures out;
    out.values.assign(2 * dim, 0.0);
    for (const auto& v : vectors)
        for (std::size_t d = 0; d < dim; ++d) out.values[d] += v.coeffs[d];
    for (std::size_t d = 0; d < dim; ++d) out.values[d] /= n;
    for (const auto& v : vectors) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double delta = v.coeffs[d] - out.values[d];
            out.values[dim + d] += delta * delta;
        }
    }
    // Population variance: divide by the frame count, so one-frame
    // utterances get a spread of exactly zero.
    for (std::size_t d = 0; d < dim; ++d)
        out.values[dim + d] = std::sqrt(out.values[dim + d] / n);
    return out;
}

Standardizer fit_standardizer(const LabeledDataset& dataset) {
    if (dataset.rows.empty()) throw EmptyDataset("cannot fit scaler on empty dataset");
    const std::size_t dim = dataset.feature_dim;
    Standardizer scaler;
    scaler.mean.assign(dim, 0.0);
    scaler.std_dev.assign(dim, 0.0);

    const double n = double(dataset.rows.size());
    for (const LabeledRow& row : dataset.rows) {
        if (row.features.dim() != dim)
            throw DimensionMismatch("row dim " + std::to_string(row.features.dim()) +
                                    " vs dataset dim " + std::to_string(dim));
        for (std::size_t i = 0; i < dim; ++i) scaler.mean[i] += row.features.values[i];
    }
    for (std::size_t i = 0; i < dim; ++i) scaler.mean[i] /= n;
    for (const LabeledRow& row : dataset.rows) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double delta = row.features.values[i] - scaler.mean[i];
            scaler.std_dev[i] += delta * delta;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        scaler.std_dev[i] = std::sqrt(scaler.std_dev[i] / n);
        if (scaler.std_dev[i] == 0.0) scaler.std_dev[i] = 1.0;
    }
    return scaler;
}

UtteranceFeatures extract_utterance(const audio::AudioClip& clip,
                                    const mfcc::MfccConfig& config,
                                    double frame_ms, double hop_ms) {
    const auto vectors = mfcc::mfcc_pipeline(clip, config, frame_ms, hop_ms);
    return summarize(vectors);
}

}  // namespace voxid::features
