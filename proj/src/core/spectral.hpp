// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "core/chain.hpp"
#include "core/dense.hpp"
#include "core/tolerances.hpp"

namespace mch {

/// Exponent of the weighted norm. Only 1, 2 and infinity are supported.
enum class NormIndex { One, Two, Infinity };

/// Positive probability weights defining the L_p(pi) norms.
class NormContext {
public:
    explicit NormContext(Vector pi, const Tolerances& tol = default_tolerances());

    [[nodiscard]] const Vector& pi() const noexcept { return pi_; }
    [[nodiscard]] std::size_t size() const noexcept { return pi_.size(); }

    /// ||v||_{L_p(pi)}
    [[nodiscard]] double norm(std::span<const double> v, NormIndex p) const;
    /// <u, v>_{L_2(pi)} = sum_i pi_i u_i v_i
    [[nodiscard]] double inner(std::span<const double> u, std::span<const double> v) const;

private:
    Vector pi_;
};

/// ||T||_{L_p(pi) -> L_p(pi)}.
///   p = inf: max_i sum_j |T_ij|
///   p = 1:   max_j (1/pi_j) sum_i pi_i |T_ij|
///   p = 2:   largest singular value of D^{1/2} T D^{-1/2}, D = diag(pi)
double opnorm(const Matrix& t, const NormContext& ctx, NormIndex p,
              const Tolerances& tol = default_tolerances());

/// D^{1/2} T D^{-1/2}; turns the L_2(pi) operator norm into the Euclidean one.
Matrix conjugate_by_weights(const Matrix& t, std::span<const double> pi);

struct Contraction {
    double lambda = 0.0;
    /// Non-reversible chains can have lambda >= 1; every bound is then trivial.
    [[nodiscard]] bool vacuous() const noexcept { return lambda >= 1.0; }
};

/// lambda = ||A - E_pi||_{L_2(pi) -> L_2(pi)}
Contraction contraction(const MarkovChain& chain, const Tolerances& tol = default_tolerances());

/// A^k - E_pi, which equals (A - E_pi)^k.
Matrix power_deviation(const MarkovChain& chain, std::size_t k);

}  // namespace mch
