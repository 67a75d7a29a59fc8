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
#include <vector>

#include "voxid/features.hpp"
#include "voxid/svm.hpp"

namespace voxid::eval {

struct SpeakerResult {
    int speaker_id = 0;
    int total = 0;
    int correct = 0;
    int false_count = 0;
    double success_pct = 0.0;
};

/// Per-speaker identification outcome plus the aggregate row. Percentages
/// are always recomputed from the counts; the counts are authoritative.
struct EvaluationReport {
    std::vector<SpeakerResult> rows;
    int total = 0;
    int correct = 0;
    int false_count = 0;
    double success_pct = 0.0;
    std::string solver_name;
};

/// 100 * correct / total rounded half-up to two decimals, computed in
/// integer arithmetic so the rounding is exact.
double success_percent(int correct, int total);

/// Runs the model over a labeled test set and tallies correct and false
/// identifications per true speaker. Throws UnknownLabel (listing the
/// offending rows) when a test label is not an enrolled speaker.
EvaluationReport evaluate(const svm::MulticlassModel& model,
                          const features::LabeledDataset& test,
                          const std::string& solver_name);

/// Aligned plain-text table, one row per speaker plus the aggregate.
std::string render_table(const EvaluationReport& report);

/// Machine-readable CSV with exactly the report fields.
std::string to_csv(const EvaluationReport& report);

}  // namespace voxid::eval
