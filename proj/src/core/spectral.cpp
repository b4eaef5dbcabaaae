// SPDX-License-Identifier: Apache-2.0
#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/jacobi.hpp"

namespace mch {

NormContext::NormContext(Vector pi, const Tolerances& tol) : pi_(std::move(pi)) {
    if (pi_.empty()) fail(ErrorCode::EmptyInput, "norm weights are empty");
    for (double p : pi_) {
        if (!std::isfinite(p) || p <= 0.0) fail(ErrorCode::InvalidArgument, "norm weights must be positive");
    }
    if (std::abs(compensated_sum(pi_) - 1.0) > tol.stationarity) {
        fail(ErrorCode::InvalidArgument, "norm weights must sum to 1");
    }
}

double NormContext::norm(std::span<const double> v, NormIndex p) const {
    if (v.size() != pi_.size()) fail(ErrorCode::DimensionMismatch, "vector length differs from weights");
    switch (p) {
        case NormIndex::Infinity: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
        case NormIndex::One: {
            CompensatedSum acc;
            for (std::size_t i = 0; i < v.size(); ++i) acc.add(pi_[i] * std::abs(v[i]));
            return acc.value();
        }
        case NormIndex::Two: {
            CompensatedSum acc;
            for (std::size_t i = 0; i < v.size(); ++i) acc.add(pi_[i] * v[i] * v[i]);
            return std::sqrt(acc.value());
        }
    }
    return 0.0;
}

double NormContext::inner(std::span<const double> u, std::span<const double> v) const {
    if (u.size() != pi_.size() || v.size() != pi_.size()) {
        fail(ErrorCode::DimensionMismatch, "vector length differs from weights");
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) acc.add(pi_[i] * u[i] * v[i]);
    return acc.value();
}

Matrix conjugate_by_weights(const Matrix& t, std::span<const double> pi) {
    if (!t.square() || t.rows() != pi.size()) {
        fail(ErrorCode::DimensionMismatch, "matrix dimension " + std::to_string(t.rows()) +
                                               " does not match weights of length " + std::to_string(pi.size()));
    }
    Matrix m(t.rows(), t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double left = std::sqrt(pi[i]);
        for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = left * t(i, j) / std::sqrt(pi[j]);
    }
    return m;
}

double opnorm(const Matrix& t, const NormContext& ctx, NormIndex p, const Tolerances& tol) {
    if (!t.square() || t.rows() != ctx.size()) {
        fail(ErrorCode::DimensionMismatch, "operator of dimension " + std::to_string(t.rows()) + "x" +
                                               std::to_string(t.cols()) + " against weights of length " +
                                               std::to_string(ctx.size()));
    }
    const Vector& pi = ctx.pi();
    const std::size_t n = t.rows();
    switch (p) {
        case NormIndex::Infinity: {
            double best = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                CompensatedSum row;
                for (double x : t.row(i)) row.add(std::abs(x));
                best = std::max(best, row.value());
            }
            return best;
        }
        case NormIndex::One: {
            double best = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                CompensatedSum col;
                for (std::size_t i = 0; i < n; ++i) col.add(pi[i] * std::abs(t(i, j)));
                best = std::max(best, col.value() / pi[j]);
            }
            return best;
        }
        case NormIndex::Two:
            return singular_values(conjugate_by_weights(t, pi), tol).front();
    }
    return 0.0;
}

Contraction contraction(const MarkovChain& chain, const Tolerances& tol) {
    const Matrix deviation = chain.transition() - averaging_operator(chain).matrix();
    const NormContext ctx(chain.stationary(), tol);
    const double lambda = opnorm(deviation, ctx, NormIndex::Two, tol);
    return Contraction{std::abs(lambda - 1.0) <= tol.lambda_unit ? 1.0 : lambda};
}

Matrix power_deviation(const MarkovChain& chain, std::size_t k) {
    if (k == 0) fail(ErrorCode::OutOfRange, "power_deviation needs k >= 1");
    return matrix_power(chain.transition(), k) - averaging_operator(chain).matrix();
}

}  // namespace mch
