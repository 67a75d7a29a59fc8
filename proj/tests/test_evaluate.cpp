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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "voxid/errors.hpp"
#include "voxid/evaluate.hpp"

using namespace voxid;

namespace {

// A cleanly separable 3-speaker setup; speaker means sit far apart.
svm::MulticlassModel tiny_model(features::LabeledDataset& train) {
    train.feature_dim = 2;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 0.3);
    const double centers[3][2] = {{4.0, 0.0}, {-4.0, 0.0}, {0.0, 4.0}};
    for (int s = 0; s < 3; ++s)
        for (int u = 0; u < 10; ++u)
            train.rows.push_back(
                {features::UtteranceFeatures{{centers[s][0] + gauss(rng),
                                              centers[s][1] + gauss(rng)}},
                 s + 1});
    return svm::train_one_vs_rest(train, 10.0, svm::KernelSpec::rbf(0.5),
                                  svm::SolverChoice{});
}

}  // namespace

TEST_CASE("success percentages round half-up to two decimals") {
    CHECK(eval::success_percent(147, 160) == doctest::Approx(91.88));
    CHECK(eval::success_percent(152, 160) == doctest::Approx(95.00));
    CHECK(eval::success_percent(16, 20) == doctest::Approx(80.00));
    CHECK(eval::success_percent(20, 20) == doctest::Approx(100.00));
    CHECK(eval::success_percent(0, 20) == doctest::Approx(0.00));
    CHECK(eval::success_percent(1, 3) == doctest::Approx(33.33));
    CHECK(eval::success_percent(2, 3) == doctest::Approx(66.67));
    // Exact-half case (2.5 hundredths) rounds up, not to even.
    CHECK(eval::success_percent(1, 4000) == doctest::Approx(0.03));
    CHECK(eval::success_percent(1, 8000) == doctest::Approx(0.01));
}

TEST_CASE("evaluation tallies per-speaker counts and the aggregate") {
    features::LabeledDataset train;
    const svm::MulticlassModel mc = tiny_model(train);

    const eval::EvaluationReport report = eval::evaluate(mc, train, "smo");
    REQUIRE(report.rows.size() == 3);
    for (const auto& r : report.rows) {
        CHECK(r.total == 10);
        CHECK(r.correct + r.false_count == r.total);
        CHECK(r.success_pct ==
              doctest::Approx(eval::success_percent(r.correct, r.total)));
    }
    CHECK(report.total == 30);
    CHECK(report.correct == 30);  // training rows on separable data
    CHECK(report.false_count == 0);
    CHECK(report.success_pct == doctest::Approx(100.0));
    CHECK(report.solver_name == "smo");

    // Aggregate equals the sum of the rows.
    int total = 0, correct = 0, wrong = 0;
    for (const auto& r : report.rows) {
        total += r.total;
        correct += r.correct;
        wrong += r.false_count;
    }
    CHECK(total == report.total);
    CHECK(correct == report.correct);
    CHECK(wrong == report.false_count);
}

TEST_CASE("unknown test labels are listed") {
    features::LabeledDataset train;
    const svm::MulticlassModel mc = tiny_model(train);

    features::LabeledDataset test = train;
    test.rows[4].label = 9;
    test.rows[7].label = 12;
    try {
        eval::evaluate(mc, test, "smo");
        FAIL("expected UnknownLabel");
    } catch (const UnknownLabel& e) {
        const std::string what = e.what();
        CHECK(what.find("row 5") != std::string::npos);
        CHECK(what.find("label 9") != std::string::npos);
        CHECK(what.find("row 8") != std::string::npos);
    }
}

TEST_CASE("table and csv render the recomputed percentages") {
    features::LabeledDataset train;
    const svm::MulticlassModel mc = tiny_model(train);
    const eval::EvaluationReport report = eval::evaluate(mc, train, "chunking");

    const std::string table = eval::render_table(report);
    CHECK(table.find("chunking") != std::string::npos);
    CHECK(table.find("100.00") != std::string::npos);

    const std::string csv = eval::to_csv(report);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "speaker_id,total,correct,false,success_pct,solver");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 4);  // 3 speakers + aggregate
    CHECK(csv.find("all,30,30,0,100.00,chunking") != std::string::npos);
}
