// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "core/dense.hpp"
#include "core/tolerances.hpp"

namespace mch {

/// Finite-state chain with a strictly positive stationary distribution.
/// Only constructible through validate_chain / two_state_chain, so every
/// instance satisfies the row-sum, positivity and stationarity invariants.
class MarkovChain {
public:
    [[nodiscard]] std::size_t size() const noexcept { return stationary_.size(); }
    [[nodiscard]] const Matrix& transition() const noexcept { return transition_; }
    [[nodiscard]] const Vector& stationary() const noexcept { return stationary_; }

    /// Running row sums of the transition matrix, for sampling.
    [[nodiscard]] std::span<const double> cumulative_row(std::size_t state) const noexcept {
        return cumulative_.row(state);
    }
    [[nodiscard]] std::span<const double> cumulative_stationary() const noexcept {
        return cumulative_stationary_;
    }

private:
    friend MarkovChain validate_chain(Matrix, std::optional<Vector>, const Tolerances&);
    MarkovChain(Matrix transition, Vector stationary);

    Matrix transition_;
    Vector stationary_;
    Matrix cumulative_;
    Vector cumulative_stationary_;
};

/// Validates a transition matrix (and optional stationary vector). When the
/// stationary vector is omitted it is found by power iteration.
MarkovChain validate_chain(Matrix transition, std::optional<Vector> stationary = std::nullopt,
                           const Tolerances& tol = default_tolerances());

/// Symmetric two-state chain with A = [[(1+l)/2, (1-l)/2], [(1-l)/2, (1+l)/2]].
MarkovChain two_state_chain(double lambda);

/// Fixed point of x -> xA by power iteration on the lazy chain (A+I)/2.
Vector stationary_distribution(const Matrix& transition, const Tolerances& tol = default_tolerances());

/// Per-step functions f_i on the state space with bounds |f_i| <= a_i.
class FunctionFamily {
public:
    /// values is n_steps x n_states; bounds has n_steps entries. An empty
    /// bounds vector means "use max_v |f_i(v)|".
    FunctionFamily(Matrix values, Vector bounds = {}, const Tolerances& tol = default_tolerances());

    [[nodiscard]] std::size_t steps() const noexcept { return values_.rows(); }
    [[nodiscard]] std::size_t states() const noexcept { return values_.cols(); }
    [[nodiscard]] double operator()(std::size_t step, std::size_t state) const noexcept {
        return values_(step, state);
    }
    [[nodiscard]] std::span<const double> step(std::size_t i) const noexcept { return values_.row(i); }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] const Vector& bounds() const noexcept { return bounds_; }

    /// sqrt(sum a_i^2)
    [[nodiscard]] double bound_norm() const noexcept;

    /// The same function repeated for n steps.
    static FunctionFamily repeated(std::span<const double> f, std::size_t n_steps);

private:
    Matrix values_;
    Vector bounds_;
};

/// Throws NotMeanZero unless sum_v pi_v f_i(v) = 0 for every step, and
/// DimensionMismatch if the state counts differ.
void require_mean_zero(const FunctionFamily& funcs, const MarkovChain& chain,
                       const Tolerances& tol = default_tolerances());

/// f_i(1) = 1, f_i(2) = -1 for n steps; pairs with two_state_chain.
FunctionFamily two_state_functions(std::size_t n_steps);

/// (E_pi)_{ij} = pi_j.
class AveragingOperator {
public:
    explicit AveragingOperator(std::span<const double> pi);
    [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] std::size_t size() const noexcept { return matrix_.rows(); }

private:
    Matrix matrix_;
};

AveragingOperator averaging_operator(const MarkovChain& chain);

}  // namespace mch
