// SPDX-License-Identifier: Apache-2.0
#include "core/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace mch {

namespace {

std::string fmt_index(std::size_t i) { return std::to_string(i); }

Matrix running_rows(const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a(i, j);
            c(i, j) = acc;
        }
    }
    return c;
}

double l1_residual(const Vector& x, const Matrix& a) {
    const Vector y = left_multiply(x, a);
    double r = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) r += std::abs(y[j] - x[j]);
    return r;
}

}  // namespace

MarkovChain::MarkovChain(Matrix transition, Vector stationary)
    : transition_(std::move(transition)),
      stationary_(std::move(stationary)),
      cumulative_(running_rows(transition_)) {
    cumulative_stationary_.resize(stationary_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < stationary_.size(); ++i) {
        acc += stationary_[i];
        cumulative_stationary_[i] = acc;
    }
}

Vector stationary_distribution(const Matrix& transition, const Tolerances& tol) {
    const std::size_t n = transition.rows();
    Matrix lazy = transition;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) lazy(i, j) *= 0.5;
        lazy(i, i) += 0.5;
    }
    Vector x(n, 1.0 / static_cast<double>(n));
    for (std::size_t it = 0; it < tol.power_max_iterations; ++it) {
        Vector y = left_multiply(x, lazy);
        const double total = compensated_sum(y);
        for (double& v : y) v /= total;
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) change += std::abs(y[j] - x[j]);
        x = std::move(y);
        if (change < tol.power_residual && l1_residual(x, transition) < tol.power_residual) return x;
    }
    fail(ErrorCode::NonConvergence, "stationary power iteration did not reach residual " +
                                        std::to_string(tol.power_residual));
}

MarkovChain validate_chain(Matrix transition, std::optional<Vector> stationary, const Tolerances& tol) {
    if (!transition.square() || transition.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "transition matrix must be square and non-empty");
    }
    const std::size_t n = transition.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = transition(i, j);
            if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
                fail(ErrorCode::NonStochastic, "transition entry (" + fmt_index(i) + "," + fmt_index(j) +
                                                   ") = " + std::to_string(a) + " outside [0,1]");
            }
            row += a;
        }
        if (std::abs(row - 1.0) > tol.row_sum) {
            fail(ErrorCode::NonStochastic,
                 "row " + fmt_index(i) + " sums to " + std::to_string(row));
        }
    }

    Vector pi;
    if (stationary) {
        pi = std::move(*stationary);
        if (pi.size() != n) {
            fail(ErrorCode::DimensionMismatch, "stationary vector has " + std::to_string(pi.size()) +
                                                   " entries for " + std::to_string(n) + " states");
        }
        for (double p : pi) {
            if (!std::isfinite(p)) fail(ErrorCode::NotStationary, "non-finite stationary entry");
        }
        if (std::abs(compensated_sum(pi) - 1.0) > tol.stationarity) {
            fail(ErrorCode::NotStationary, "stationary vector does not sum to 1");
        }
        const Vector moved = left_multiply(pi, transition);
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(moved[j] - pi[j]) > tol.stationarity) {
                fail(ErrorCode::NotStationary, "(pi A)_" + fmt_index(j) + " = " + std::to_string(moved[j]) +
                                                   " differs from pi_" + fmt_index(j));
            }
        }
    } else {
        pi = stationary_distribution(transition, tol);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (pi[i] <= tol.stationary_floor) {
            fail(ErrorCode::DegenerateStationary,
                 "stationary mass of state " + fmt_index(i) + " is " + std::to_string(pi[i]));
        }
    }
    return MarkovChain(std::move(transition), std::move(pi));
}

MarkovChain two_state_chain(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        fail(ErrorCode::OutOfRange, "two-state chain needs 0 <= lambda < 1, got " + std::to_string(lambda));
    }
    const double stay = (1.0 + lambda) / 2.0;
    const double move = (1.0 - lambda) / 2.0;
    return validate_chain(Matrix{{stay, move}, {move, stay}}, Vector{0.5, 0.5});
}

FunctionFamily::FunctionFamily(Matrix values, Vector bounds, const Tolerances& tol)
    : values_(std::move(values)), bounds_(std::move(bounds)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        fail(ErrorCode::EmptyInput, "function family needs at least one step and one state");
    }
    for (double x : values_.data()) {
        if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite function value");
    }
    if (bounds_.empty()) {
        bounds_.resize(values_.rows());
        for (std::size_t i = 0; i < values_.rows(); ++i) {
            double a = 0.0;
            for (double x : values_.row(i)) a = std::max(a, std::abs(x));
            bounds_[i] = a;
        }
        return;
    }
    if (bounds_.size() != values_.rows()) {
        fail(ErrorCode::DimensionMismatch, "bounds has " + std::to_string(bounds_.size()) +
                                               " entries for " + std::to_string(values_.rows()) + " steps");
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        const double a = bounds_[i];
        if (!std::isfinite(a) || a < 0.0) {
            fail(ErrorCode::BoundViolation, "bound a_" + fmt_index(i) + " must be finite and >= 0");
        }
        for (std::size_t v = 0; v < values_.cols(); ++v) {
            if (std::abs(values_(i, v)) > a + tol.bound_slack) {
                fail(ErrorCode::BoundViolation, "|f_" + fmt_index(i) + "(" + fmt_index(v) + ")| = " +
                                                    std::to_string(std::abs(values_(i, v))) + " exceeds a_" +
                                                    fmt_index(i) + " = " + std::to_string(a));
            }
        }
    }
}

double FunctionFamily::bound_norm() const noexcept {
    CompensatedSum acc;
    for (double a : bounds_) acc.add(a * a);
    return std::sqrt(acc.value());
}

FunctionFamily FunctionFamily::repeated(std::span<const double> f, std::size_t n_steps) {
    Matrix values(n_steps, f.size());
    for (std::size_t i = 0; i < n_steps; ++i) std::copy(f.begin(), f.end(), values.row(i).begin());
    return FunctionFamily(std::move(values));
}

void require_mean_zero(const FunctionFamily& funcs, const MarkovChain& chain, const Tolerances& tol) {
    if (funcs.states() != chain.size()) {
        fail(ErrorCode::DimensionMismatch, "function family has " + std::to_string(funcs.states()) +
                                               " states, chain has " + std::to_string(chain.size()));
    }
    const Vector& pi = chain.stationary();
    for (std::size_t i = 0; i < funcs.steps(); ++i) {
        CompensatedSum mean;
        for (std::size_t v = 0; v < pi.size(); ++v) mean.add(pi[v] * funcs(i, v));
        if (std::abs(mean.value()) > tol.mean_zero) {
            fail(ErrorCode::NotMeanZero,
                 "E_pi[f_" + fmt_index(i) + "] = " + std::to_string(mean.value()) + " is not zero");
        }
    }
}

FunctionFamily two_state_functions(std::size_t n_steps) {
    const double f[] = {1.0, -1.0};
    return FunctionFamily::repeated(f, n_steps);
}

AveragingOperator::AveragingOperator(std::span<const double> pi) : matrix_(pi.size(), pi.size()) {
    for (std::size_t i = 0; i < pi.size(); ++i) std::copy(pi.begin(), pi.end(), matrix_.row(i).begin());
}

AveragingOperator averaging_operator(const MarkovChain& chain) {
    return AveragingOperator(chain.stationary());
}

}  // namespace mch
