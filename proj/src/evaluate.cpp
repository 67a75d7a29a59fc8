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

#include "voxid/evaluate.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>

#include "voxid/errors.hpp"

namespace voxid::eval {

namespace {

// Hundredths of a percent, rounded half-up in exact integer arithmetic.
std::int64_t percent_hundredths(int correct, int total) {
    if (total <= 0) return 0;
    return (std::int64_t(20000) * correct + total) / (std::int64_t(2) * total);
}

std::string format_percent(int correct, int total) {
    const std::int64_t h = percent_hundredths(correct, total);
    std::string out = std::to_string(h / 100) + '.';
    const std::int64_t frac = h % 100;
    out += char('0' + frac / 10);
    out += char('0' + frac % 10);
    return out;
}

}  // namespace

double success_percent(int correct, int total) {
    return double(percent_hundredths(correct, total)) / 100.0;
}

EvaluationReport evaluate(const svm::MulticlassModel& model,
                          const features::LabeledDataset& test,
                          const std::string& solver_name) {
    std::map<int, SpeakerResult> tally;
    for (int id : model.speaker_ids) tally[id] = SpeakerResult{id, 0, 0, 0, 0.0};

    std::string unknown;
    for (std::size_t r = 0; r < test.rows.size(); ++r) {
        if (tally.find(test.rows[r].label) == tally.end()) {
            if (!unknown.empty()) unknown += ", ";
            unknown += "row " + std::to_string(r + 1) + " (label " +
                       std::to_string(test.rows[r].label) + ")";
        }
    }
    if (!unknown.empty())
        throw UnknownLabel("test labels are not enrolled speakers: " + unknown);

    for (const features::LabeledRow& row : test.rows) {
        const svm::Identification id = svm::identify(model, row.features);
        SpeakerResult& res = tally[row.label];
        ++res.total;
        if (id.speaker_id == row.label)
            ++res.correct;
        else
            ++res.false_count;
    }

    EvaluationReport report;
    report.solver_name = solver_name;
    for (auto& [id, res] : tally) {
        res.success_pct = success_percent(res.correct, res.total);
        report.total += res.total;
        report.correct += res.correct;
        report.false_count += res.false_count;
        report.rows.push_back(res);
    }
    report.success_pct = success_percent(report.correct, report.total);
    return report;
}

std::string render_table(const EvaluationReport& report) {
    std::ostringstream out;
    if (!report.solver_name.empty())
        out << "Training algorithm: " << report.solver_name << "\n";

    const char* fmt = "%-12s %-14s %-16s %-14s %-s\n";
    char line[160];
    std::snprintf(line, sizeof line, fmt, "Speaker ID", "Total samples",
                  "Correct samples", "False samples", "Success rate (%)");
    out << line;
    for (const SpeakerResult& r : report.rows) {
        std::snprintf(line, sizeof line, fmt, std::to_string(r.speaker_id).c_str(),
                      std::to_string(r.total).c_str(),
                      std::to_string(r.correct).c_str(),
                      std::to_string(r.false_count).c_str(),
                      format_percent(r.correct, r.total).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, fmt, "all", std::to_string(report.total).c_str(),
                  std::to_string(report.correct).c_str(),
                  std::to_string(report.false_count).c_str(),
                  format_percent(report.correct, report.total).c_str());
    out << line;
    return out.str();
}

std::string to_csv(const EvaluationReport& report) {
    std::string out = "speaker_id,total,correct,false,success_pct,solver\n";
    for (const SpeakerResult& r : report.rows) {
        out += std::to_string(r.speaker_id) + ',' + std::to_string(r.total) + ',' +
               std::to_string(r.correct) + ',' + std::to_string(r.false_count) +
               ',' + format_percent(r.correct, r.total) + ',' +
               report.solver_name + '\n';
    }
    out += "all," + std::to_string(report.total) + ',' +
           std::to_string(report.correct) + ',' +
           std::to_string(report.false_count) + ',' +
           format_percent(report.correct, report.total) + ',' +
           report.solver_name + '\n';
    return out;
}

}  // namespace voxid::eval
