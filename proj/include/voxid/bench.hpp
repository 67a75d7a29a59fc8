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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "voxid/svm.hpp"

namespace voxid::bench {

struct BenchRow {
    std::size_t training_set_size = 0;
    std::string solver;
    std::string kernel;
    double wall_seconds = 0.0;  ///< median over repeats, solver call only
    std::uint64_t iterations = 0;
    std::size_t support_vector_count = 0;
    double dual_objective = 0.0;
    bool flagged = false;  ///< solvers disagreed on the objective at this size
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

struct BenchOptions {
    std::vector<std::size_t> sizes = {2477, 3470, 4912, 7366, 9888};
    std::vector<svm::SolverChoice> solvers;  ///< defaults to {smo, chunking}
    svm::KernelKind kernel = svm::KernelKind::linear;
    double gamma = 0.1;  ///< rbf only
    /// Small box constraint, the classic setup for linear timing sweeps;
    /// large C on overlapping data mostly measures bound-multiplier churn.
    double C = 0.1;
    double tol = 1e-3;
    int dim = 10;
    std::uint64_t seed = 1;
    int repeats = 1;
    /// Larger than the training default: chunking legitimately needs far
    /// more two-multiplier steps than SMO at these sizes, and a truncated
    /// run would fake its timing.
    std::uint64_t max_steps = 200'000'000;
};

/// Synthetic binary classification set: two unit-variance Gaussian clusters
/// in `dim` dimensions whose means sit 2.5631 sigma apart along the first
/// axis, so roughly 10% of the points land on the wrong side of the ideal
/// boundary. Fully determined by (n, dim, seed).
svm::TrainingProblem make_gaussian_problem(std::size_t n, int dim,
                                           std::uint64_t seed);

/// Trains every solver at every size on the seeded synthetic data and
/// records wall time (median of `repeats`), iteration count, support-vector
/// count and the dual objective. Rows of one size are flagged when the
/// solvers' objectives differ by more than 1e-3 relative. Sizes must be
/// >= 100 and strictly increasing, else BadSizeList. Per-row solver
/// failures are reported on `progress` and the sweep continues.
BenchReport run_bench(const BenchOptions& options, std::ostream* progress);

std::string render_table(const BenchReport& report);
std::string to_csv(const BenchReport& report);

}  // namespace voxid::bench
