// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "core/chain.hpp"
#include "core/dense.hpp"
#include "core/lattice.hpp"
#include "core/tolerances.hpp"

namespace mch {

/// E[S_n^m] for m = 0..q.
struct MomentTable {
    int q = 0;
    Vector moments;
};

inline constexpr int kMaxMomentOrder = 32;
inline constexpr std::size_t kMaxTrajectories = 10'000'000;
inline constexpr std::size_t kMaxLatticeCells = 20'000'000;

/// E[f_{w_1}(Y_{w_1}) ... f_{w_q}(Y_{w_q})] for zero-based nondecreasing w,
/// by propagating pi (.) f_{w_1} through A^{w_{i+1}-w_i}.
double exact_monomial_expectation(const MarkovChain& chain, const FunctionFamily& funcs,
                                  std::span<const std::size_t> w);

/// Moments through the joint recursion over (state, power):
///   M_{k+1}(v', m) = sum_j C(m,j) f_{k+1}(v')^j sum_v M_k(v, m-j) A_{v v'}
MomentTable exact_moments(const MarkovChain& chain, const FunctionFamily& funcs, int q);

/// E[exp(theta S_n)] by the transfer recursion. Throws Overflow when an
/// intermediate leaves the representable range.
double exact_mgf(const MarkovChain& chain, const FunctionFamily& funcs, double theta);

/// Exact law of S_n from the joint (state, lattice sum) recursion.
LatticeDistribution exact_distribution(const MarkovChain& chain, const FunctionFamily& funcs,
                                       const Tolerances& tol = default_tolerances());

/// Pr[|S_n| >= threshold].
double exact_tail(const MarkovChain& chain, const FunctionFamily& funcs, double threshold,
                  const Tolerances& tol = default_tolerances());

/// Calls visit(path, probability) for every trajectory of length n.
/// TooLarge when N^n exceeds kMaxTrajectories.
void for_each_trajectory(const MarkovChain& chain, std::size_t n,
                         const std::function<void(std::span<const std::size_t>, double)>& visit);

/// Law of S_n by trajectory enumeration; the reference every other oracle
/// is checked against.
LatticeDistribution brute_force_distribution(const MarkovChain& chain, const FunctionFamily& funcs,
                                             const Tolerances& tol = default_tolerances());

/// Two sides of an inequality evaluated numerically.
struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    [[nodiscard]] bool holds(double slack) const noexcept { return lhs <= rhs + slack; }
};

/// |<1, U_1 (T_1+E) U_2 ... U_k (T_k+E) U_{k+1} 1>_{L_2(pi)}| against
/// prod_i ||u_i||_inf * sum_{s in S_k} prod_{j: s_j=1} ||T_j||_{L_2(pi)}.
/// Needs k+1 vectors, each mean-zero under pi (else NotMeanZero), and k matrices.
InequalityCheck verify_holder_application(std::span<const double> pi, const std::vector<Vector>& u,
                                          const std::vector<Matrix>& t,
                                          const Tolerances& tol = default_tolerances());

struct FactorizationCheck {
    double lhs = 0.0;      // <1, R_1 E R_2 E ... E R_k 1>
    double product = 0.0;  // prod_i <1, R_i 1>
    double rhs = 0.0;      // prod_i ||R_i 1||_{L_1(pi)}
};

/// Averaging operators between factors split the inner product.
FactorizationCheck verify_averaging_split(std::span<const double> pi, const std::vector<Matrix>& r);

/// ||U_1 T_1 U_2 ... T_{k-1} U_k 1||_{L_1(pi)} against
/// ||u_k||_inf prod_{i<k} ||u_i||_inf ||T_i||_{L_2(pi)}. Needs k vectors, k-1 matrices.
InequalityCheck verify_diagonal_chain(std::span<const double> pi, const std::vector<Vector>& u,
                                      const std::vector<Matrix>& t,
                                      const Tolerances& tol = default_tolerances());

}  // namespace mch
