// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/bounds.hpp"
#include "core/chain.hpp"
#include "core/dense.hpp"
#include "core/rng.hpp"
#include "core/tolerances.hpp"

namespace mch {

struct SimConfig {
    std::size_t trials = 10'000;
    std::uint64_t master_seed = 0;
    /// Worker threads. Advisory: results do not depend on it.
    std::size_t parallelism = 1;

    void validate() const;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
    [[nodiscard]] bool contains(double x) const noexcept { return low <= x && x <= high; }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

/// Runs body(begin, end) over [0, trials) split into contiguous chunks on up
/// to `parallelism` threads. Bodies must only write to per-index storage.
void for_trial_ranges(std::size_t trials, std::size_t parallelism,
                      const std::function<void(std::size_t, std::size_t)>& body);

/// Y_1 ~ pi, Y_{k+1} ~ A(Y_k, .). Deterministic in `seed`.
std::vector<std::size_t> sample_path(const MarkovChain& chain, std::size_t n, std::uint64_t seed);
void sample_path_into(const MarkovChain& chain, Rng& rng, std::span<std::size_t> out);

enum class TailColumn : std::size_t { Iid = 0, Healy, Rao, Fjs };
inline constexpr std::size_t kTailColumns = 4;

struct TailRow {
    double u = 0.0;
    double threshold = 0.0;  // u * ||a||_2
    std::size_t hits = 0;
    double estimate = 0.0;
    Interval ci;
    std::array<BoundValue, kTailColumns> bounds{};
};

struct TailReport {
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    double lambda = 0.0;
    double bound_norm = 0.0;
    std::vector<TailRow> rows;
};

/// Empirical Pr[|S_n| >= u ||a||_2] for each u, with Wilson intervals and the
/// closed-form tail bounds at the chain's lambda.
TailReport estimate_tail(const MarkovChain& chain, const FunctionFamily& funcs, std::span<const double> u_grid,
                         const SimConfig& cfg, const Tolerances& tol = default_tolerances());

enum class NormKind { Euclidean, Sup, SchattenInf };

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    Interval ci;
    std::size_t trials = 0;
};

/// Monte Carlo E||g_1 X_1 + ... + g_n X_n|| with standard normal g_i. For
/// SchattenInf each X_i is a d*d row-major matrix.
MeanEstimate estimate_gaussian_norm(const std::vector<Vector>& x, NormKind kind, const SimConfig& cfg);

/// ||v|| in the requested norm (v of length d*d for SchattenInf).
double vector_norm(std::span<const double> v, NormKind kind);

struct VectorTailRow {
    double threshold = 0.0;
    double u = 0.0;  // threshold / E||sum g_i X_i||
    std::size_t hits = 0;
    double estimate = 0.0;
    Interval ci;
    double curve = 0.0;  // L exp(-C u^2 (1 - lambda))
};

struct VectorTailReport {
    MeanEstimate gaussian;
    double lambda = 0.0;
    BoundConstants constants{};
    /// Smallest L for which the curve (at the configured C) dominates every row.
    double fitted_l = 0.0;
    std::vector<VectorTailRow> rows;
};

/// Empirical Pr[||sum f_i(Y_i) X_i|| >= t] against the Gaussian baseline.
VectorTailReport estimate_vector_sum_tail(const MarkovChain& chain, const FunctionFamily& funcs,
                                          const std::vector<Vector>& x, NormKind kind,
                                          std::span<const double> thresholds, const SimConfig& cfg,
                                          const BoundConstants& constants = {},
                                          const Tolerances& tol = default_tolerances());

/// Mean with a normal-approximation 95% interval, summed pairwise.
MeanEstimate summarize_samples(std::span<const double> samples);

}  // namespace mch
