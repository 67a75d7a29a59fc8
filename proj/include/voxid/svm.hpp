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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxid/features.hpp"

namespace voxid::svm {

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

enum class KernelKind { linear, rbf, polynomial };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = 1.0;   ///< rbf: exp(-gamma ||x-z||^2)
    int degree = 3;       ///< polynomial: (x.z + coef0)^degree
    double coef0 = 0.0;

    static KernelSpec linear() { return {KernelKind::linear, 0.0, 0, 0.0}; }
    static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma, 0, 0.0}; }
    static KernelSpec polynomial(int degree, double coef0) {
        return {KernelKind::polynomial, 0.0, degree, coef0};
    }

    void validate() const;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> z);

// ---------------------------------------------------------------------------
// Dual problem and solver state
// ---------------------------------------------------------------------------

/// Binary soft-margin training problem in the dual:
/// maximize sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
/// subject to 0 <= a_i <= C and sum_i a_i y_i = 0.
struct TrainingProblem {
    std::vector<std::vector<double>> points;
    std::vector<int> labels;  ///< each -1 or +1, both classes present
    double C = 10.0;
    KernelSpec kernel;
    double tol = 1e-3;   ///< KKT tolerance
    double eps = 1e-8;   ///< minimum multiplier change per step
    std::uint64_t max_steps = 10'000'000;  ///< two-multiplier update budget
    std::size_t kernel_cache_rows = 0;     ///< 0 disables the row cache
    std::uint64_t rng_seed = 0;            ///< heuristic tie-breaking stream

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
    void validate() const;
};

/// Mutable optimization state. The error cache holds E_i = f(x_i) - y_i and
/// is kept current for non-bound multipliers; entries flagged invalid are
/// recomputed on demand. The dual objective is maintained incrementally.
struct SolverState {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<double> errors;
    std::vector<char> errors_valid;
    double objective = 0.0;

    /// State at alpha = 0: feasible, objective 0, errors = -y (exact).
    static SolverState initial(const TrainingProblem& problem);
};

/// f(x) under the current state: sum_i a_i y_i K(x_i, x) + bias.
double decision_from_state(const SolverState& state,
                           const TrainingProblem& problem,
                           std::span<const double> x);

/// Magnitude of example i's KKT violation beyond the problem tolerance;
/// zero when the conditions hold within tol. Computed from the multipliers
/// directly, independent of the error cache.
double kkt_violation(const SolverState& state, const TrainingProblem& problem,
                     std::size_t i);

/// Analytic joint optimization of multipliers i and j on their constraint
/// segment. Updates alphas, bias, objective and the cached errors; returns
/// false when no progress is possible (degenerate segment or step below
/// eps). Requires a state whose flagged error-cache entries are current.
bool solve_two_multipliers(SolverState& state, const TrainingProblem& problem,
                           std::size_t i, std::size_t j);

/// Dual objective recomputed from scratch; cross-checks the incremental
/// value kept in SolverState.
double dual_objective(const SolverState& state, const TrainingProblem& problem);

// ---------------------------------------------------------------------------
// Trained models
// ---------------------------------------------------------------------------

struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coeffs;  ///< alpha_i * y_i per support vector
    double bias = 0.0;
    KernelSpec kernel;

    // training metadata
    std::string solver_name;
    double C = 0.0;
    std::uint64_t iterations = 0;  ///< successful two-multiplier steps
    double train_seconds = 0.0;
    double dual_objective = 0.0;
    bool truncated = false;  ///< stopped by the step budget, not convergence

    /// Explicit weight vector, cached for linear kernels; equals the
    /// kernel-sum form up to rounding.
    std::optional<std::vector<double>> weights;

    void finalize_weights();
};

double decision_value(const SvmModel& model, std::span<const double> x);
/// sign(f(x)) with sign(0) = +1.
int classify(const SvmModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Training entry points
// ---------------------------------------------------------------------------

/// Working-set policy for decompose_train.
struct DecomposeStrategy {
    enum class Kind { chunking, fixed_size };
    Kind kind = Kind::chunking;
    std::size_t chunk_m = 50;   ///< chunking: violators added per step
    std::size_t fixed_q = 50;   ///< fixed size: working-set size
    std::size_t fixed_swap = 10;  ///< fixed size: examples swapped per step

    static DecomposeStrategy chunking(std::size_t m) {
        return {Kind::chunking, m, 0, 0};
    }
    static DecomposeStrategy fixed_size(std::size_t q, std::size_t swap) {
        return {Kind::fixed_size, 0, q, swap};
    }
    std::string name() const;
};

/// Sequential minimal optimization: repeatedly picks two multipliers by
/// Platt's heuristics (alternating full and non-bound passes, second choice
/// by largest |E_i - E_j| with randomized fallbacks) and solves each pair
/// analytically until no example violates the KKT conditions within tol.
SvmModel smo_train(const TrainingProblem& problem);

/// Working-set decomposition. Chunking keeps every non-zero multiplier plus
/// the M worst KKT violators; fixed_size keeps a constant-size set, swapping
/// violators in and settled bound examples out. Sub-problems are solved by
/// the same analytic two-multiplier routine restricted to the working set,
/// warm-started from the previous solution.
SvmModel decompose_train(const TrainingProblem& problem,
                         const DecomposeStrategy& strategy);

// ---------------------------------------------------------------------------
// Multiclass (one speaker vs the rest)
// ---------------------------------------------------------------------------

struct SolverChoice {
    enum class Kind { smo, chunking, fixed_size };
    Kind kind = Kind::smo;
    std::size_t chunk_m = 50;
    std::size_t fixed_q = 50;
    std::size_t fixed_swap = 10;

    std::string name() const;
};

struct MulticlassModel {
    std::vector<int> speaker_ids;  ///< ascending
    std::vector<SvmModel> models;  ///< parallel to speaker_ids
    features::Standardizer scaler;

    std::size_t feature_dim() const {
        return scaler.mean.size();
    }
};

/// Trains one binary model per speaker (that speaker +1, everyone else -1)
/// on standardized features; the fitted scaler is embedded in the result.
/// Throws TooFewSpeakers when fewer than two labels are present.
MulticlassModel train_one_vs_rest(const features::LabeledDataset& dataset,
                                  double C, const KernelSpec& kernel,
                                  const SolverChoice& solver,
                                  double tol = 1e-3);

struct Identification {
    int speaker_id = 0;
    std::vector<double> scores;  ///< per speaker, in speaker_ids order
};

/// Argmax of the per-speaker decision values on standardized features;
/// ties go to the lowest speaker id. `raw_features` is unstandardized.
Identification identify(const MulticlassModel& model,
                        const features::UtteranceFeatures& raw_features);

}  // namespace voxid::svm
