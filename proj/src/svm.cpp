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

#include "voxid/svm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <unordered_map>

#include "voxid/errors.hpp"
#include "voxid/kernels.hpp"

namespace voxid::svm {

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::linear:
            return;
        case KernelKind::rbf:
            if (gamma <= 0.0) throw BadProblem("rbf kernel needs gamma > 0");
            return;
        case KernelKind::polynomial:
            if (degree < 1) throw BadProblem("polynomial kernel needs degree >= 1");
            return;
    }
    throw BadProblem("unknown kernel kind");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> z) {
    if (x.size() != z.size())
        throw DimensionMismatch("kernel arguments of dim " +
                                std::to_string(x.size()) + " and " +
                                std::to_string(z.size()));
    switch (spec.kind) {
        case KernelKind::linear:
            return kernels::dot(x, z);
        case KernelKind::rbf:
            return std::exp(-spec.gamma * kernels::squared_distance(x, z));
        case KernelKind::polynomial:
            return std::pow(kernels::dot(x, z) + spec.coef0, spec.degree);
    }
    throw BadProblem("unknown kernel kind");
}

// ---------------------------------------------------------------------------
// Problem / state
// ---------------------------------------------------------------------------

void TrainingProblem::validate() const {
    if (points.size() < 2) throw BadProblem("need at least 2 training points");
    if (points.size() != labels.size())
        throw BadProblem("points and labels differ in length");
    const std::size_t d = points.front().size();
    for (const auto& p : points)
        if (p.size() != d) throw DimensionMismatch("training points of mixed dimension");
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y != 1 && y != -1) throw BadProblem("labels must be -1 or +1");
        pos |= y == 1;
        neg |= y == -1;
    }
    if (!pos || !neg)
        throw SingleClassData("training data contains a single class");
    if (C <= 0.0) throw BadProblem("C must be positive");
    if (tol <= 0.0 || eps <= 0.0) throw BadProblem("tol and eps must be positive");
    kernel.validate();
}

SolverState SolverState::initial(const TrainingProblem& problem) {
    SolverState st;
    const std::size_t n = problem.size();
    st.alphas.assign(n, 0.0);
    st.bias = 0.0;
    st.errors.resize(n);
    // f is identically zero at alpha = 0, so E_i = -y_i exactly.
    for (std::size_t i = 0; i < n; ++i) st.errors[i] = -double(problem.labels[i]);
    st.errors_valid.assign(n, 1);
    st.objective = 0.0;
    return st;
}

double decision_from_state(const SolverState& state,
                           const TrainingProblem& problem,
                           std::span<const double> x) {
    double f = state.bias;
    for (std::size_t j = 0; j < problem.size(); ++j) {
        if (state.alphas[j] == 0.0) continue;
        f += state.alphas[j] * problem.labels[j] *
             kernel_eval(problem.kernel, problem.points[j], x);
    }
    return f;
}

namespace {

// KKT residual r = y f(x) - 1 mapped to a violation magnitude.
double violation_from_residual(double r, double alpha, double C, double tol) {
    double gap;
    if (alpha <= 0.0)
        gap = std::max(0.0, -r);  // margin must reach 1
    else if (alpha >= C)
        gap = std::max(0.0, r);  // margin must not exceed 1
    else
        gap = std::abs(r);  // on the margin
    return gap > tol ? gap : 0.0;
}

}  // namespace

double kkt_violation(const SolverState& state, const TrainingProblem& problem,
                     std::size_t i) {
    if (i >= problem.size())
        throw IndexOutOfRange("example index " + std::to_string(i) +
                              " out of range");
    const double f = decision_from_state(state, problem, problem.points[i]);
    const double r = problem.labels[i] * f - 1.0;
    return violation_from_residual(r, state.alphas[i], problem.C, problem.tol);
}

double dual_objective(const SolverState& state, const TrainingProblem& problem) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const double ai = state.alphas[i];
        if (ai == 0.0) continue;
        linear += ai;
        for (std::size_t j = 0; j < problem.size(); ++j) {
            const double aj = state.alphas[j];
            if (aj == 0.0) continue;
            quad += ai * aj * problem.labels[i] * problem.labels[j] *
                    kernel_eval(problem.kernel, problem.points[i],
                                problem.points[j]);
        }
    }
    return linear - 0.5 * quad;
}

// ---------------------------------------------------------------------------
// The two-multiplier solver core
// ---------------------------------------------------------------------------

namespace {

/// Membership list with O(1) insert/erase, used to track the non-bound and
/// the support-vector index sets as multipliers move.
class IndexSet {
public:
    explicit IndexSet(std::size_t n) : pos_(n, 0) {}

    bool contains(std::size_t i) const { return pos_[i] != 0; }
    const std::vector<std::size_t>& items() const { return items_; }

    void insert(std::size_t i) {
        if (pos_[i]) return;
        items_.push_back(i);
        pos_[i] = items_.size();
    }

    void erase(std::size_t i) {
        if (!pos_[i]) return;
        const std::size_t at = pos_[i] - 1;
        const std::size_t last = items_.back();
        items_[at] = last;
        pos_[last] = at + 1;
        items_.pop_back();
        pos_[i] = 0;
    }

private:
    std::vector<std::size_t> items_;
    std::vector<std::size_t> pos_;  // position + 1, 0 = absent
};

/// Owns one optimization run: Platt's SMO loop over a configurable index
/// universe, so the same core drives plain SMO (universe = everything) and
/// the decomposition sub-problems (universe = working set).
class Solver {
public:
    Solver(const TrainingProblem& problem, SolverState& state)
        : prob_(problem),
          st_(state),
          nonbound_(problem.size()),
          support_(problem.size()),
          in_active_(problem.size(), 0),
          rng_(problem.rng_seed ^ 0x9e3779b97f4a7c15ULL),
          snap_(1e-10 * std::max(1.0, problem.C)),
          dust_(1e-12 * std::max(1.0, problem.C)) {
        if (prob_.kernel.kind == KernelKind::linear) {
            w_.assign(prob_.dim(), 0.0);
            linear_ = true;
        }
        for (std::size_t i = 0; i < prob_.size(); ++i) {
            if (st_.alphas[i] > 0.0) {
                support_.insert(i);
                if (linear_)
                    kernels::axpy(st_.alphas[i] * prob_.labels[i],
                                  prob_.points[i], w_);
            }
            if (is_nonbound(i))
                nonbound_.insert(i);
            else
                st_.errors_valid[i] = 0;  // cache only covers non-bound entries
        }
    }

    std::uint64_t steps() const { return steps_; }
    bool truncated() const { return truncated_; }

    bool is_nonbound(std::size_t i) const {
        return st_.alphas[i] > 0.0 && st_.alphas[i] < prob_.C;
    }

    double error(std::size_t i) {
        if (st_.errors_valid[i]) return st_.errors[i];
        const double e = fresh_error(i);
        if (nonbound_.contains(i)) {
            st_.errors[i] = e;
            st_.errors_valid[i] = 1;
        }
        return e;
    }

    double violation(std::size_t i) {
        const double r = prob_.labels[i] * error(i);  // y E = y f - 1
        return violation_from_residual(r, st_.alphas[i], prob_.C, prob_.tol);
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = st_.alphas[i1], a2 = st_.alphas[i2];
        const int y1 = prob_.labels[i1], y2 = prob_.labels[i2];
        const double s = double(y1) * double(y2);
        const double C = prob_.C;
        const double E1 = error(i1), E2 = error(i2);

        double L, H;
        if (y1 != y2) {
            L = std::max(0.0, a2 - a1);
            H = std::min(C, C + a2 - a1);
        } else {
            L = std::max(0.0, a1 + a2 - C);
            H = std::min(C, a1 + a2);
        }
        if (L >= H) return false;

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = 2.0 * k12 - k11 - k22;

        double a2new;
        if (eta < 0.0) {
            a2new = a2 - double(y2) * (E1 - E2) / eta;
            a2new = std::clamp(a2new, L, H);
        } else {
            // Flat or convex along the segment: the maximum sits at an end.
            const double gain_lo = objective_delta(s * (a2 - L), L - a2, E1, E2,
                                                   y1, y2, k11, k12, k22);
            const double gain_hi = objective_delta(s * (a2 - H), H - a2, E1, E2,
                                                   y1, y2, k11, k12, k22);
            if (gain_lo > gain_hi + prob_.eps)
                a2new = L;
            else if (gain_lo < gain_hi - prob_.eps)
                a2new = H;
            else
                return false;
        }
        // Snap onto the box corners when they are inside the segment, so
        // bound / non-bound classification stays exact. The dust-level snap
        // also catches values stranded a few ulps off a corner by the L/H
        // arithmetic; the derived a1 absorbs the rounding.
        if (a2new < snap_ && L == 0.0)
            a2new = 0.0;
        else if (a2new > C - snap_ && H == C)
            a2new = C;
        if (a2new < dust_)
            a2new = 0.0;
        else if (a2new > C - dust_)
            a2new = C;

        if (a2new == a2) return false;
        // Sub-eps steps are noise unless they land the multiplier exactly on
        // a segment end; those close out stragglers parked next to a bound.
        if (a2new != L && a2new != H &&
            std::abs(a2new - a2) < prob_.eps * (a2new + a2 + prob_.eps))
            return false;

        double a1new = a1 + s * (a2 - a2new);
        if (a1new < dust_)
            a1new = 0.0;
        else if (a1new > C - dust_)
            a1new = C;
        a1new = std::clamp(a1new, 0.0, C);

        const double d1 = a1new - a1;
        const double d2 = a2new - a2;

        const double b_old = st_.bias;
        const double b1 = b_old - E1 - y1 * d1 * k11 - y2 * d2 * k12;
        const double b2 = b_old - E2 - y1 * d1 * k12 - y2 * d2 * k22;
        double b_new;
        if (a1new > 0.0 && a1new < C)
            b_new = b1;
        else if (a2new > 0.0 && a2new < C)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        st_.objective += objective_delta(d1, d2, E1, E2, y1, y2, k11, k12, k22);

        if (linear_) {
            kernels::axpy(y1 * d1, prob_.points[i1], w_);
            kernels::axpy(y2 * d2, prob_.points[i2], w_);
        }

        // Keep cached errors of the other non-bound examples current.
        const double db = b_new - b_old;
        st_.bias = b_new;
        const std::vector<double>* row1 = nullptr;
        const std::vector<double>* row2 = nullptr;
        if (!linear_ && cache_enabled()) {
            row1 = &cached_row(i1);
            row2 = &cached_row(i2);
        }
        for (std::size_t k : nonbound_.items()) {
            if (k == i1 || k == i2 || !st_.errors_valid[k]) continue;
            if (linear_) {
                st_.errors[k] =
                    kernels::dot(w_, prob_.points[k]) + b_new - prob_.labels[k];
            } else {
                const double k1k = row1 ? (*row1)[k] : kernel(i1, k);
                const double k2k = row2 ? (*row2)[k] : kernel(i2, k);
                st_.errors[k] += y1 * d1 * k1k + y2 * d2 * k2k + db;
            }
        }
        st_.errors[i1] = E1 + y1 * d1 * k11 + y2 * d2 * k12 + db;
        st_.errors[i2] = E2 + y1 * d1 * k12 + y2 * d2 * k22 + db;

        st_.alphas[i1] = a1new;
        st_.alphas[i2] = a2new;
        update_membership(i1);
        update_membership(i2);
        ++steps_;
        return true;
    }

    /// Platt's outer loop restricted to `active`. Alternates passes over all
    /// active examples and passes over the non-bound ones until a full pass
    /// changes nothing.
    void run(std::span<const std::size_t> active) {
        std::fill(in_active_.begin(), in_active_.end(), 0);
        for (std::size_t i : active) in_active_[i] = 1;

        bool examine_all = true;
        std::size_t num_changed = 0;
        while (num_changed > 0 || examine_all) {
            num_changed = 0;
            for (std::size_t i : active) {
                if (!examine_all && !is_nonbound(i)) continue;
                num_changed += examine(i, active) ? 1 : 0;
                if (steps_ >= prob_.max_steps) {
                    truncated_ = true;
                    return;
                }
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
        }
    }

    const std::vector<std::size_t>& support_items() const {
        return support_.items();
    }

    /// Re-derives the bias that certifies the KKT conditions for the
    /// current multipliers. Platt's running bias tracks the last optimized
    /// pair; when every multiplier sits at a bound the valid bias is a
    /// whole interval and the running value may fall outside it. Interior
    /// multipliers pin the bias (averaged for stability); otherwise the
    /// midpoint of the feasible interval is used.
    void finalize_bias() {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        double interior_sum = 0.0;
        std::size_t interior_count = 0;
        for (std::size_t i = 0; i < prob_.size(); ++i) {
            const double r = st_.bias - error(i);  // margin-exact bias for i
            if (is_nonbound(i)) {
                interior_sum += r;
                ++interior_count;
            } else {
                const bool at_zero = st_.alphas[i] == 0.0;
                const bool positive = prob_.labels[i] == 1;
                if (at_zero == positive)
                    lo = std::max(lo, r);  // alpha=0,y=+1 or alpha=C,y=-1
                else
                    hi = std::min(hi, r);
            }
        }
        double b_new = st_.bias;
        if (interior_count > 0)
            b_new = interior_sum / double(interior_count);
        else if (std::isfinite(lo) && std::isfinite(hi))
            b_new = 0.5 * (lo + hi);
        else if (std::isfinite(lo))
            b_new = lo;
        else if (std::isfinite(hi))
            b_new = hi;
        set_bias(b_new);
    }

    void set_bias(double b_new) {
        const double db = b_new - st_.bias;
        if (db == 0.0) return;
        st_.bias = b_new;
        for (std::size_t i = 0; i < prob_.size(); ++i)
            if (st_.errors_valid[i]) st_.errors[i] += db;
    }

private:
    void update_membership(std::size_t i) {
        if (st_.alphas[i] > 0.0)
            support_.insert(i);
        else
            support_.erase(i);
        if (is_nonbound(i)) {
            nonbound_.insert(i);
            st_.errors_valid[i] = 1;  // just written exactly
        } else {
            nonbound_.erase(i);
            st_.errors_valid[i] = 0;
        }
    }

    bool cache_enabled() const { return prob_.kernel_cache_rows >= 2; }

    const std::vector<double>& cached_row(std::size_t i) {
        auto it = rows_.find(i);
        if (it != rows_.end()) {
            // Refresh recency so fetching a second row never evicts the
            // first one of the pair.
            const auto pos = std::find(row_order_.begin(), row_order_.end(), i);
            if (pos != row_order_.end()) row_order_.erase(pos);
            row_order_.push_back(i);
            return it->second;
        }
        std::vector<double> row(prob_.size());
        for (std::size_t k = 0; k < prob_.size(); ++k)
            row[k] = kernel_eval(prob_.kernel, prob_.points[i], prob_.points[k]);
        while (rows_.size() >= prob_.kernel_cache_rows && !row_order_.empty()) {
            rows_.erase(row_order_.front());
            row_order_.pop_front();
        }
        row_order_.push_back(i);
        return rows_.emplace(i, std::move(row)).first->second;
    }

    double kernel(std::size_t i, std::size_t j) {
        if (cache_enabled()) {
            auto it = rows_.find(i);
            if (it != rows_.end()) return it->second[j];
            it = rows_.find(j);
            if (it != rows_.end()) return it->second[i];
        }
        return kernel_eval(prob_.kernel, prob_.points[i], prob_.points[j]);
    }

    double fresh_error(std::size_t i) {
        if (linear_)
            return kernels::dot(w_, prob_.points[i]) + st_.bias -
                   prob_.labels[i];
        double f = st_.bias;
        for (std::size_t j : support_.items())
            f += st_.alphas[j] * prob_.labels[j] * kernel(j, i);
        return f - prob_.labels[i];
    }

    // Dual objective change for moving multipliers i1, i2 by d1, d2 while
    // everything else stays fixed. g_i = f(x_i) - bias under the old state.
    double objective_delta(double d1, double d2, double E1, double E2, int y1,
                           int y2, double k11, double k12, double k22) const {
        const double g1 = E1 + y1 - st_.bias;
        const double g2 = E2 + y2 - st_.bias;
        return d1 + d2 - y1 * d1 * g1 - y2 * d2 * g2 - 0.5 * d1 * d1 * k11 -
               0.5 * d2 * d2 * k22 - double(y1) * double(y2) * d1 * d2 * k12;
    }

    bool examine(std::size_t i2, std::span<const std::size_t> active) {
        const double E2 = error(i2);
        const double r2 = prob_.labels[i2] * E2;
        const bool violates = (r2 < -prob_.tol && st_.alphas[i2] < prob_.C) ||
                              (r2 > prob_.tol && st_.alphas[i2] > 0.0);
        if (!violates) return false;

        // Second choice: the cached non-bound partner with the largest
        // error gap makes the biggest analytic step.
        std::size_t best = SIZE_MAX;
        double best_gap = -1.0;
        for (std::size_t k : nonbound_.items()) {
            if (k == i2 || !in_active_[k]) continue;
            const double gap = std::abs(error(k) - E2);
            if (gap > best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        if (best != SIZE_MAX && take_step(best, i2)) return true;

        // Fall back to scanning non-bound examples from a random start,
        // then everything.
        const std::size_t n = active.size();
        std::size_t offset = rng_() % n;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t k = active[(offset + t) % n];
            if (k == i2 || !is_nonbound(k)) continue;
            if (take_step(k, i2)) return true;
        }
        offset = rng_() % n;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t k = active[(offset + t) % n];
            if (k == i2) continue;
            if (take_step(k, i2)) return true;
        }
        return false;
    }

    const TrainingProblem& prob_;
    SolverState& st_;
    bool linear_ = false;
    std::vector<double> w_;  // explicit weights, linear kernel only
    IndexSet nonbound_;
    IndexSet support_;
    std::vector<char> in_active_;
    std::mt19937_64 rng_;
    std::uint64_t steps_ = 0;
    bool truncated_ = false;
    const double snap_;
    const double dust_;
    std::unordered_map<std::size_t, std::vector<double>> rows_;
    std::deque<std::size_t> row_order_;
};

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// At alpha = 0 every example violates KKT equally, so the "worst" ties are
// broken by interleaving the classes: a single-class working set cannot
// move at all under the equality constraint.
std::vector<std::size_t> balanced_initial_set(const TrainingProblem& problem,
                                              std::size_t target) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < problem.size(); ++i)
        (problem.labels[i] == 1 ? pos : neg).push_back(i);
    std::vector<std::size_t> active;
    std::size_t p = 0, q = 0;
    while (active.size() < target && (p < pos.size() || q < neg.size())) {
        if (p < pos.size()) active.push_back(pos[p++]);
        if (active.size() < target && q < neg.size()) active.push_back(neg[q++]);
    }
    std::sort(active.begin(), active.end());
    return active;
}

SvmModel build_model(const TrainingProblem& problem, const SolverState& state,
                     std::string solver_name, std::uint64_t steps,
                     bool truncated, double seconds) {
    SvmModel model;
    for (std::size_t i = 0; i < problem.size(); ++i) {
        if (state.alphas[i] > 0.0) {
            model.support_vectors.push_back(problem.points[i]);
            model.coeffs.push_back(state.alphas[i] * problem.labels[i]);
        }
    }
    model.bias = state.bias;
    model.kernel = problem.kernel;
    model.solver_name = std::move(solver_name);
    model.C = problem.C;
    model.iterations = steps;
    model.train_seconds = seconds;
    model.dual_objective = state.objective;
    model.truncated = truncated;
    model.finalize_weights();
    return model;
}

}  // namespace

bool solve_two_multipliers(SolverState& state, const TrainingProblem& problem,
                           std::size_t i, std::size_t j) {
    if (i >= problem.size() || j >= problem.size())
        throw IndexOutOfRange("multiplier index out of range");
    Solver solver(problem, state);
    return solver.take_step(i, j);
}

SvmModel smo_train(const TrainingProblem& problem) {
    problem.validate();
    SolverState state = SolverState::initial(problem);
    Solver solver(problem, state);
    const auto idx = all_indices(problem.size());

    const auto t0 = std::chrono::steady_clock::now();
    solver.run(idx);
    solver.finalize_bias();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

    return build_model(problem, state, "smo", solver.steps(), solver.truncated(),
                       dt.count());
}

std::string DecomposeStrategy::name() const {
    return kind == Kind::chunking ? "chunking" : "fixed-size";
}

SvmModel decompose_train(const TrainingProblem& problem,
                         const DecomposeStrategy& strategy) {
    problem.validate();
    const std::size_t n = problem.size();
    if (strategy.kind == DecomposeStrategy::Kind::chunking) {
        if (strategy.chunk_m < 2) throw BadProblem("chunking needs M >= 2");
    } else {
        if (strategy.fixed_q < 2) throw BadProblem("fixed-size needs q >= 2");
        if (strategy.fixed_swap < 1) throw BadProblem("fixed-size needs swap >= 1");
    }

    SolverState state = SolverState::initial(problem);
    Solver solver(problem, state);

    const std::size_t base_size =
        std::min(n, strategy.kind == DecomposeStrategy::Kind::chunking
                        ? std::max<std::size_t>(2, strategy.chunk_m)
                        : std::max<std::size_t>(2, strategy.fixed_q));
    std::vector<std::size_t> active = balanced_initial_set(problem, base_size);

    const auto t0 = std::chrono::steady_clock::now();
    bool truncated = false;
    std::uint64_t steps_before = 0;
    std::size_t stalls = 0;
    std::size_t extra = 0;  // chunking: widen selection when a sub-solve stalls

    for (std::uint64_t outer = 0; outer < 100000; ++outer) {
        solver.run(active);
        solver.finalize_bias();
        if (solver.truncated()) {
            truncated = true;
            break;
        }

        // Global optimality check over the whole problem.
        struct Violator {
            std::size_t index;
            double magnitude;
        };
        std::vector<Violator> violators;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = solver.violation(i);
            if (v > 0.0) violators.push_back({i, v});
        }
        if (violators.empty()) break;

        if (solver.steps() == steps_before) {
            // The sub-problem could not move although violators remain.
            // Widen the next working set; give up after repeated stalls.
            extra += strategy.chunk_m;
            if (++stalls >= 10) {
                truncated = true;
                break;
            }
        } else {
            stalls = 0;
            extra = 0;
        }
        steps_before = solver.steps();

        std::sort(violators.begin(), violators.end(),
                  [](const Violator& a, const Violator& b) {
                      if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
                      return a.index < b.index;
                  });

        if (strategy.kind == DecomposeStrategy::Kind::chunking) {
            // Working set: every non-zero multiplier plus the M worst
            // violators (all of them when fewer than M violate).
            std::vector<char> keep(n, 0);
            for (std::size_t i : solver.support_items()) keep[i] = 1;
            const std::size_t m =
                std::min(violators.size(), strategy.chunk_m + extra);
            for (std::size_t v = 0; v < m; ++v) keep[violators[v].index] = 1;
            active.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (keep[i]) active.push_back(i);
            if (active.size() < 2) active = all_indices(std::min<std::size_t>(2, n));
        } else {
            std::vector<char> in_set(n, 0);
            std::size_t pos_in_set = 0, neg_in_set = 0;
            for (std::size_t i : active) {
                in_set[i] = 1;
                (problem.labels[i] == 1 ? pos_in_set : neg_in_set) += 1;
            }

            std::vector<std::size_t> incoming;
            for (const Violator& v : violators) {
                if (!in_set[v.index]) incoming.push_back(v.index);
                if (incoming.size() == strategy.fixed_swap) break;
            }
            if (incoming.empty()) {
                // Violators are all inside the set already; rerun on it.
                continue;
            }

            // Swap out settled examples, preferring ones parked at a bound,
            // but never strip a class from the set: the equality constraint
            // makes a single-class sub-problem immovable.
            std::vector<std::size_t> removable(active);
            std::sort(removable.begin(), removable.end(),
                      [&](std::size_t a, std::size_t b) {
                          auto klass = [&](std::size_t i) {
                              if (state.alphas[i] == 0.0) return 0;
                              if (state.alphas[i] == problem.C) return 1;
                              return 2;
                          };
                          if (klass(a) != klass(b)) return klass(a) < klass(b);
                          if (state.alphas[a] != state.alphas[b])
                              return state.alphas[a] < state.alphas[b];
                          return a < b;
                      });
            std::size_t next_removable = 0;
            for (std::size_t in : incoming) {
                // The incoming example joins before its partner leaves, so
                // a same-class swap is always allowed.
                std::size_t& in_cls =
                    problem.labels[in] == 1 ? pos_in_set : neg_in_set;
                ++in_cls;
                std::size_t cand = SIZE_MAX;
                while (next_removable < removable.size()) {
                    const std::size_t c = removable[next_removable++];
                    std::size_t& cls =
                        problem.labels[c] == 1 ? pos_in_set : neg_in_set;
                    if (cls > 1) {
                        --cls;
                        cand = c;
                        break;
                    }
                }
                if (cand == SIZE_MAX) {
                    --in_cls;
                    break;
                }
                in_set[cand] = 0;
                in_set[in] = 1;
            }
            active.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (in_set[i]) active.push_back(i);
        }
    }

    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return build_model(problem, state, strategy.name(), solver.steps(), truncated,
                       dt.count());
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

void SvmModel::finalize_weights() {
    weights.reset();
    if (kernel.kind != KernelKind::linear || support_vectors.empty()) return;
    std::vector<double> w(support_vectors.front().size(), 0.0);
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
        kernels::axpy(coeffs[i], support_vectors[i], w);
    weights = std::move(w);
}

double decision_value(const SvmModel& model, std::span<const double> x) {
    if (!model.support_vectors.empty() &&
        model.support_vectors.front().size() != x.size())
        throw DimensionMismatch("probe dim " + std::to_string(x.size()) +
                                " vs model dim " +
                                std::to_string(model.support_vectors.front().size()));
    if (model.weights) return kernels::dot(*model.weights, x) + model.bias;
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.coeffs[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    return f;
}

int classify(const SvmModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// One vs rest
// ---------------------------------------------------------------------------

std::string SolverChoice::name() const {
    switch (kind) {
        case Kind::smo: return "smo";
        case Kind::chunking: return "chunking";
        case Kind::fixed_size: return "fixed-size";
    }
    return "unknown";
}

MulticlassModel train_one_vs_rest(const features::LabeledDataset& dataset,
                                  double C, const KernelSpec& kernel,
                                  const SolverChoice& solver, double tol) {
    const std::vector<int> ids = dataset.labels();
    if (ids.size() < 2)
        throw TooFewSpeakers("one-vs-rest needs at least 2 speakers, got " +
                             std::to_string(ids.size()));
    for (int id : ids)
        if (id < 1) throw BadProblem("speaker ids must be >= 1");

    MulticlassModel mc;
    mc.speaker_ids = ids;
    mc.scaler = dataset.scaler ? *dataset.scaler
                               : features::fit_standardizer(dataset);

    std::vector<std::vector<double>> standardized;
    standardized.reserve(dataset.rows.size());
    for (const auto& row : dataset.rows)
        standardized.push_back(mc.scaler.apply(row.features).values);

    for (int id : ids) {
        TrainingProblem problem;
        problem.points = standardized;
        problem.labels.reserve(dataset.rows.size());
        for (const auto& row : dataset.rows)
            problem.labels.push_back(row.label == id ? 1 : -1);
        problem.C = C;
        problem.kernel = kernel;
        problem.tol = tol;

        try {
            switch (solver.kind) {
                case SolverChoice::Kind::smo:
                    mc.models.push_back(smo_train(problem));
                    break;
                case SolverChoice::Kind::chunking:
                    mc.models.push_back(decompose_train(
                        problem, DecomposeStrategy::chunking(solver.chunk_m)));
                    break;
                case SolverChoice::Kind::fixed_size:
                    mc.models.push_back(decompose_train(
                        problem, DecomposeStrategy::fixed_size(solver.fixed_q,
                                                               solver.fixed_swap)));
                    break;
            }
        } catch (const SingleClassData& e) {
            throw SingleClassData("speaker " + std::to_string(id) + ": " + e.what());
        }
    }
    return mc;
}

Identification identify(const MulticlassModel& model,
                        const features::UtteranceFeatures& raw_features) {
    const features::UtteranceFeatures scaled = model.scaler.apply(raw_features);
    Identification result;
    result.scores.reserve(model.models.size());
    double best = 0.0;
    for (std::size_t k = 0; k < model.models.size(); ++k) {
        const double f = decision_value(model.models[k], scaled.values);
        result.scores.push_back(f);
        // Strict comparison while scanning ascending ids breaks ties toward
        // the lowest id.
        if (k == 0 || f > best) {
            best = f;
            result.speaker_id = model.speaker_ids[k];
        }
    }
    return result;
}

}  // namespace voxid::svm
