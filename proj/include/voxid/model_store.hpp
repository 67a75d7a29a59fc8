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

#include <map>
#include <string>
#include <string_view>

#include "voxid/config.hpp"
#include "voxid/features.hpp"
#include "voxid/svm.hpp"

namespace voxid::store {

struct SpeakerInfo {
    std::string name;
    int utterance_count = 0;
    std::string enrolled_at;  ///< ISO-8601 UTC text
};

/// Enrollment bookkeeping: one entry per speaker id.
struct SpeakerRegistry {
    std::map<int, SpeakerInfo> entries;
};

/// Everything a saved model carries: the per-speaker binary models with
/// their shared scaler, the registry, and the front-end configuration, so
/// identification from a bare WAV file is self-contained.
struct StoredModel {
    svm::MulticlassModel model;
    SpeakerRegistry registry;
    ExtractionConfig extraction;
};

/// Shortest decimal form that parses back to the identical double; keeps
/// model and dataset files value-exact across a save/load round trip.
std::string format_real(double value);

/// Strict full-token parse of format_real output (and ordinary decimals).
double parse_real(std::string_view text);

/// Writes the line-oriented `VOXID-MODEL v1` text format (UTF-8, \n line
/// endings; grammar in docs/model_format.md). Every modeled speaker must
/// have a named registry entry, else ConsistencyError.
void save_model(const StoredModel& stored, const std::string& path);

/// Parses and validates a model file; any structural defect raises
/// MalformedModel with the offending line number, an unrecognized format
/// version raises UnknownVersion.
StoredModel load_model(const std::string& path);

/// Dataset CSV: header `label,f0,...,f{d-1}`, one utterance per row,
/// decimal-point reals, value-exact round trip.
void write_dataset_csv(const features::LabeledDataset& dataset,
                       const std::string& path);
features::LabeledDataset read_dataset_csv(const std::string& path);

/// Current UTC time as ISO-8601 text, used for enrollment stamps.
std::string now_utc_iso8601();

}  // namespace voxid::store
