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

#include "voxid/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "voxid/errors.hpp"

namespace voxid::bench {

namespace {

// Means +-kSeparation/2 on the first axis give a ~10% Bayes overlap for
// unit-variance clusters (Phi(-1.2816) = 0.10).
constexpr double kSeparation = 2.5631;

svm::SvmModel train_with(const svm::TrainingProblem& problem,
                         const svm::SolverChoice& choice) {
    switch (choice.kind) {
        case svm::SolverChoice::Kind::smo:
            return svm::smo_train(problem);
        case svm::SolverChoice::Kind::chunking:
            return svm::decompose_train(
                problem, svm::DecomposeStrategy::chunking(choice.chunk_m));
        case svm::SolverChoice::Kind::fixed_size:
            return svm::decompose_train(
                problem,
                svm::DecomposeStrategy::fixed_size(choice.fixed_q, choice.fixed_swap));
    }
    throw BadProblem("unknown solver choice");
}

const char* kernel_name(svm::KernelKind kind) {
    switch (kind) {
        case svm::KernelKind::linear: return "linear";
        case svm::KernelKind::rbf: return "rbf";
        case svm::KernelKind::polynomial: return "polynomial";
    }
    return "unknown";
}

}  // namespace

svm::TrainingProblem make_gaussian_problem(std::size_t n, int dim,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    svm::TrainingProblem problem;
    problem.points.reserve(n);
    problem.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = coin(rng) ? 1 : -1;
        std::vector<double> point(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d) point[std::size_t(d)] = gauss(rng);
        point[0] += label * kSeparation / 2.0;
        problem.points.push_back(std::move(point));
        problem.labels.push_back(label);
    }
    problem.rng_seed = seed;
    return problem;
}

BenchReport run_bench(const BenchOptions& options, std::ostream* progress) {
    if (options.sizes.empty()) throw BadSizeList("no training set sizes given");
    for (std::size_t i = 0; i < options.sizes.size(); ++i) {
        if (options.sizes[i] < 100)
            throw BadSizeList("sizes must be >= 100, got " +
                              std::to_string(options.sizes[i]));
        if (i > 0 && options.sizes[i] <= options.sizes[i - 1])
            throw BadSizeList("sizes must be strictly increasing");
    }
    std::vector<svm::SolverChoice> solvers = options.solvers;
    if (solvers.empty()) {
        solvers.push_back({svm::SolverChoice::Kind::smo, 50, 50, 10});
        solvers.push_back({svm::SolverChoice::Kind::chunking, 50, 50, 10});
    }
    const int repeats = std::max(1, options.repeats);

    BenchReport report;
    for (std::size_t size : options.sizes) {
        svm::TrainingProblem problem =
            make_gaussian_problem(size, options.dim, options.seed * 1000003 + size);
        problem.C = options.C;
        problem.tol = options.tol;
        problem.max_steps = options.max_steps;
        problem.kernel = options.kernel == svm::KernelKind::rbf
                             ? svm::KernelSpec::rbf(options.gamma)
                             : svm::KernelSpec::linear();

        std::vector<std::size_t> row_indices;
        for (const svm::SolverChoice& choice : solvers) {
            std::vector<double> times;
            svm::SvmModel model;
            bool failed = false;
            for (int r = 0; r < repeats && !failed; ++r) {
                try {
                    // Wall time covers the solver call only.
                    const auto t0 = std::chrono::steady_clock::now();
                    model = train_with(problem, choice);
                    const std::chrono::duration<double> dt =
                        std::chrono::steady_clock::now() - t0;
                    times.push_back(dt.count());
                } catch (const Error& e) {
                    failed = true;
                    if (progress)
                        *progress << "bench: " << choice.name() << " at n=" << size
                                  << " failed: " << e.what() << "\n";
                }
            }
            if (failed) continue;

            std::sort(times.begin(), times.end());
            BenchRow row;
            row.training_set_size = size;
            row.solver = choice.name();
            row.kernel = kernel_name(options.kernel);
            row.wall_seconds = times[times.size() / 2];
            if (times.size() % 2 == 0)
                row.wall_seconds =
                    0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
            row.iterations = model.iterations;
            row.support_vector_count = model.support_vectors.size();
            row.dual_objective = model.dual_objective;
            row_indices.push_back(report.rows.size());
            report.rows.push_back(std::move(row));
            if (progress)
                *progress << "bench: n=" << size << " " << choice.name() << " "
                          << report.rows.back().wall_seconds << "s, "
                          << report.rows.back().iterations << " steps\n";
        }

        // All solvers optimize the same dual; flag the size when they land
        // on visibly different objectives.
        if (row_indices.size() > 1) {
            double lo = report.rows[row_indices.front()].dual_objective;
            double hi = lo;
            for (std::size_t idx : row_indices) {
                lo = std::min(lo, report.rows[idx].dual_objective);
                hi = std::max(hi, report.rows[idx].dual_objective);
            }
            const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
            if ((hi - lo) / scale > 1e-3)
                for (std::size_t idx : row_indices) report.rows[idx].flagged = true;
        }
    }
    return report;
}

std::string render_table(const BenchReport& report) {
    std::ostringstream out;
    const char* fmt = "%-10s %-12s %-10s %-14s %-12s %-10s %-16s %-s\n";
    char line[200];
    std::snprintf(line, sizeof line, fmt, "Size", "Solver", "Kernel", "Seconds",
                  "Iterations", "SVs", "Dual objective", "Note");
    out << line;
    for (const BenchRow& r : report.rows) {
        char secs[32], obj[32];
        std::snprintf(secs, sizeof secs, "%.4f", r.wall_seconds);
        std::snprintf(obj, sizeof obj, "%.6g", r.dual_objective);
        std::snprintf(line, sizeof line, fmt,
                      std::to_string(r.training_set_size).c_str(),
                      r.solver.c_str(), r.kernel.c_str(), secs,
                      std::to_string(r.iterations).c_str(),
                      std::to_string(r.support_vector_count).c_str(), obj,
                      r.flagged ? "objective-mismatch" : "");
        out << line;
    }
    return out.str();
}

std::string to_csv(const BenchReport& report) {
    std::string out =
        "training_set_size,solver,kernel,wall_seconds,iterations,"
        "support_vector_count,dual_objective,flagged\n";
    for (const BenchRow& r : report.rows) {
        char secs[32], obj[32];
        std::snprintf(secs, sizeof secs, "%.6f", r.wall_seconds);
        std::snprintf(obj, sizeof obj, "%.17g", r.dual_objective);
        out += std::to_string(r.training_set_size) + ',' + r.solver + ',' +
               r.kernel + ',' + secs + ',' + std::to_string(r.iterations) + ',' +
               std::to_string(r.support_vector_count) + ',' + obj + ',' +
               (r.flagged ? "1" : "0") + '\n';
    }
    return out;
}

}  // namespace voxid::bench
