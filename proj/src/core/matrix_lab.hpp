// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "core/chain.hpp"
#include "core/dense.hpp"
#include "core/montecarlo.hpp"
#include "core/tolerances.hpp"

namespace mch {

inline constexpr double kSchattenInfinity = std::numeric_limits<double>::infinity();

/// Symmetric coefficient matrix B with strictly positive entries.
class CoefficientMatrix {
public:
    /// Throws InvalidArgument unless m is exactly symmetric with positive entries.
    explicit CoefficientMatrix(Matrix m);

    static CoefficientMatrix all_ones(std::size_t d);
    /// Entries uniform on (0, 1], mirrored across the diagonal.
    static CoefficientMatrix random_uniform(std::size_t d, std::uint64_t seed);

    [[nodiscard]] std::size_t dimension() const noexcept { return entries_.rows(); }
    [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }

private:
    Matrix entries_;
};

/// Number of pairs (i, j) with i <= j.
[[nodiscard]] constexpr std::size_t upper_pair_count(std::size_t d) noexcept { return d * (d + 1) / 2; }

/// Row-major rank of (i, j), i <= j, among the upper pairs.
[[nodiscard]] constexpr std::size_t upper_pair_index(std::size_t d, std::size_t i, std::size_t j) noexcept {
    return i * d - i * (i == 0 ? 0 : i - 1) / 2 + (j - i);
}

/// Injective map from upper pairs (i <= j) to path positions 0..d(d+1)/2-1.
class FillOrder {
public:
    /// positions[upper_pair_index(d, i, j)] is the path position filling (i, j).
    /// Throws InvalidOrder if not a permutation of 0..d(d+1)/2-1.
    FillOrder(std::size_t d, std::vector<std::size_t> positions);

    static FillOrder row_major(std::size_t d);
    /// Diagonal entries first, then the strict upper triangle row by row.
    static FillOrder diagonal_first(std::size_t d);

    [[nodiscard]] std::size_t dimension() const noexcept { return d_; }
    [[nodiscard]] std::size_t length() const noexcept { return positions_.size(); }
    [[nodiscard]] std::size_t position(std::size_t i, std::size_t j) const noexcept {
        return i <= j ? positions_[upper_pair_index(d_, i, j)] : positions_[upper_pair_index(d_, j, i)];
    }

private:
    std::size_t d_;
    std::vector<std::size_t> positions_;
};

struct SigmaParams {
    double sigma = 0.0;       // max_i sqrt(sum_j b_ij^2)
    double sigma_star = 0.0;  // max_ij |b_ij|
};

SigmaParams sigma_params(const CoefficientMatrix& b);

/// X_ij = f(Y_{omega(i,j)}) b_ij on i <= j, mirrored below the diagonal.
Matrix matrix_from_path(const CoefficientMatrix& b, const FillOrder& order, std::span<const double> f,
                        std::span<const std::size_t> path);

/// Samples a path of length d(d+1)/2 with `seed` and fills X from it. f must
/// satisfy |f| <= 1 and be mean-zero under the chain's pi.
Matrix build_markov_matrix(const CoefficientMatrix& b, const FillOrder& order, const MarkovChain& chain,
                           std::span<const double> f, std::uint64_t seed,
                           const Tolerances& tol = default_tolerances());

/// Schatten p-norm for p > 0 or p = kSchattenInfinity. Symmetric input uses
/// |eigenvalues|; otherwise square roots of the eigenvalues of M^T M.
double schatten_norm(const Matrix& m, double p, const Tolerances& tol = default_tolerances());

struct MatrixExperimentConfig {
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    std::size_t parallelism = 1;
    std::vector<double> c_grid{1.0};
    bool gaussian_baseline = true;
};

struct MatrixBoundRow {
    double c = 1.0;
    double bound = 0.0;
};

struct MatrixExperimentReport {
    std::size_t dimension = 0;
    double lambda = 0.0;
    bool lambda_vacuous = false;
    SigmaParams sigma;
    double b_norm = 0.0;
    double shape = 0.0;  // sigma + sigma_star sqrt(log d)
    MeanEstimate markov;
    double max_norm = 0.0;
    std::size_t dominance_violations = 0;
    MeanEstimate gaussian;
    double gaussian_ratio = 0.0;  // markov mean / gaussian mean
    /// mean * sqrt(1 - lambda) / shape; the smallest C the run supports.
    double fitted_c = 0.0;
    std::vector<MatrixBoundRow> bounds;  // empty when lambda >= 1
};

MatrixExperimentReport run_matrix_experiment(const CoefficientMatrix& b, const FillOrder& order,
                                             const MarkovChain& chain, std::span<const double> f,
                                             const MatrixExperimentConfig& cfg,
                                             const Tolerances& tol = default_tolerances());

/// X'_ij = g_ij b_ij with independent standard normals, mirrored.
Matrix gaussian_matrix(const CoefficientMatrix& b, std::uint64_t seed);

}  // namespace mch
