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

#include <cmath>
#include <sstream>

#include "voxid/bench.hpp"
#include "voxid/errors.hpp"

using namespace voxid;

TEST_CASE("gaussian generator is seeded and overlaps about 10 percent") {
    const svm::TrainingProblem a = bench::make_gaussian_problem(2000, 10, 5);
    const svm::TrainingProblem b = bench::make_gaussian_problem(2000, 10, 5);
    CHECK(a.points == b.points);
    CHECK(a.labels == b.labels);

    const svm::TrainingProblem c = bench::make_gaussian_problem(2000, 10, 6);
    CHECK(a.points != c.points);

    // Roughly 10% of the points sit on the wrong side of the ideal plane.
    int wrong = 0;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if ((a.points[i][0] > 0 ? 1 : -1) != a.labels[i]) ++wrong;
    const double rate = double(wrong) / double(a.points.size());
    CHECK(rate > 0.06);
    CHECK(rate < 0.14);
}

TEST_CASE("default sizes follow the classic sweep") {
    const bench::BenchOptions options;
    const std::vector<std::size_t> want{2477, 3470, 4912, 7366, 9888};
    CHECK(options.sizes == want);
}

TEST_CASE("size list validation") {
    bench::BenchOptions options;
    options.sizes = {50};
    CHECK_THROWS_AS(bench::run_bench(options, nullptr), BadSizeList);
    options.sizes = {200, 200};
    CHECK_THROWS_AS(bench::run_bench(options, nullptr), BadSizeList);
    options.sizes = {300, 200};
    CHECK_THROWS_AS(bench::run_bench(options, nullptr), BadSizeList);
    options.sizes = {};
    CHECK_THROWS_AS(bench::run_bench(options, nullptr), BadSizeList);
}

TEST_CASE("small sweep: objectives agree, rerun reproduces iterations") {
    bench::BenchOptions options;
    options.sizes = {150, 300};
    options.seed = 9;

    std::ostringstream progress;
    const bench::BenchReport report = bench::run_bench(options, &progress);
    REQUIRE(report.rows.size() == 4);  // 2 sizes x {smo, chunking}

    for (std::size_t i = 0; i < report.rows.size(); i += 2) {
        const bench::BenchRow& smo = report.rows[i];
        const bench::BenchRow& chunk = report.rows[i + 1];
        CHECK(smo.solver == "smo");
        CHECK(chunk.solver == "chunking");
        CHECK(smo.training_set_size == chunk.training_set_size);
        CHECK(smo.kernel == "linear");
        CHECK(smo.wall_seconds >= 0.0);
        CHECK(!smo.flagged);
        CHECK(!chunk.flagged);
        const double rel = std::abs(smo.dual_objective - chunk.dual_objective) /
                           std::max(1.0, std::abs(smo.dual_objective));
        CHECK(rel <= 1e-3);
    }

    // Sizes strictly increasing within each solver's rows.
    CHECK(report.rows[0].training_set_size < report.rows[2].training_set_size);

    // Seeded rerun: identical iteration counts (times may differ).
    const bench::BenchReport again = bench::run_bench(options, nullptr);
    REQUIRE(again.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(again.rows[i].iterations == report.rows[i].iterations);
        CHECK(again.rows[i].support_vector_count ==
              report.rows[i].support_vector_count);
        CHECK(again.rows[i].dual_objective == report.rows[i].dual_objective);
    }

    const std::string csv = bench::to_csv(report);
    CHECK(csv.find("training_set_size,solver,kernel,wall_seconds,iterations,"
                   "support_vector_count,dual_objective,flagged") == 0);
    CHECK(bench::render_table(report).find("smo") != std::string::npos);
}

TEST_CASE("median of repeats is reported") {
    bench::BenchOptions options;
    options.sizes = {150};
    options.repeats = 3;
    options.solvers.push_back({svm::SolverChoice::Kind::smo, 50, 50, 10});
    const bench::BenchReport report = bench::run_bench(options, nullptr);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].wall_seconds >= 0.0);
}
