// SPDX-License-Identifier: Apache-2.0
#include "core/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/jacobi.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace mch {

namespace {

constexpr std::uint64_t kGaussianMatrixStream = 0xBB67AE8584CAA73BULL;
constexpr double kDominanceSlack = 1e-12;

}  // namespace

CoefficientMatrix::CoefficientMatrix(Matrix m) : entries_(std::move(m)) {
    if (!entries_.square() || entries_.rows() == 0) {
        fail(ErrorCode::DimensionMismatch, "coefficient matrix must be square and non-empty");
    }
    if (!is_symmetric(entries_)) fail(ErrorCode::InvalidArgument, "coefficient matrix must be symmetric");
    for (double x : entries_.data()) {
        if (!std::isfinite(x) || x <= 0.0) {
            fail(ErrorCode::InvalidArgument, "coefficient matrix entries must be positive");
        }
    }
}

CoefficientMatrix CoefficientMatrix::all_ones(std::size_t d) { return CoefficientMatrix(Matrix(d, d, 1.0)); }

CoefficientMatrix CoefficientMatrix::random_uniform(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) m(i, j) = m(j, i) = 1.0 - rng.uniform();
    }
    return CoefficientMatrix(std::move(m));
}

FillOrder::FillOrder(std::size_t d, std::vector<std::size_t> positions) : d_(d), positions_(std::move(positions)) {
    const std::size_t m = upper_pair_count(d);
    if (positions_.size() != m) {
        fail(ErrorCode::InvalidOrder, "fill order needs " + std::to_string(m) + " positions, got " +
                                          std::to_string(positions_.size()));
    }
    std::vector<bool> seen(m, false);
    for (std::size_t p : positions_) {
        if (p >= m) fail(ErrorCode::InvalidOrder, "fill position " + std::to_string(p) + " out of range");
        if (seen[p]) fail(ErrorCode::InvalidOrder, "fill position " + std::to_string(p) + " used twice");
        seen[p] = true;
    }
}

FillOrder FillOrder::row_major(std::size_t d) {
    std::vector<std::size_t> positions(upper_pair_count(d));
    for (std::size_t k = 0; k < positions.size(); ++k) positions[k] = k;
    return FillOrder(d, std::move(positions));
}

FillOrder FillOrder::diagonal_first(std::size_t d) {
    std::vector<std::size_t> positions(upper_pair_count(d));
    std::size_t next = 0;
    for (std::size_t i = 0; i < d; ++i) positions[upper_pair_index(d, i, i)] = next++;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) positions[upper_pair_index(d, i, j)] = next++;
    return FillOrder(d, std::move(positions));
}

SigmaParams sigma_params(const CoefficientMatrix& b) {
    SigmaParams out;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        CompensatedSum row;
        for (double x : b.entries().row(i)) {
            row.add(x * x);
            out.sigma_star = std::max(out.sigma_star, std::abs(x));
        }
        out.sigma = std::max(out.sigma, std::sqrt(row.value()));
    }
    return out;
}

Matrix matrix_from_path(const CoefficientMatrix& b, const FillOrder& order, std::span<const double> f,
                        std::span<const std::size_t> path) {
    const std::size_t d = b.dimension();
    if (order.dimension() != d) fail(ErrorCode::DimensionMismatch, "fill order dimension differs from B");
    if (path.size() < order.length()) fail(ErrorCode::DimensionMismatch, "path shorter than d(d+1)/2");
    Matrix x(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const std::size_t state = path[order.position(i, j)];
            if (state >= f.size()) fail(ErrorCode::DimensionMismatch, "path visits a state outside f");
            x(i, j) = x(j, i) = f[state] * b(i, j);
        }
    }
    return x;
}

Matrix build_markov_matrix(const CoefficientMatrix& b, const FillOrder& order, const MarkovChain& chain,
                           std::span<const double> f, std::uint64_t seed, const Tolerances& tol) {
    if (f.size() != chain.size()) fail(ErrorCode::DimensionMismatch, "f must have one value per state");
    const FunctionFamily single = FunctionFamily::repeated(f, 1);
    if (single.bounds().front() > 1.0 + tol.bound_slack) {
        fail(ErrorCode::BoundViolation, "matrix entries need |f| <= 1");
    }
    require_mean_zero(single, chain, tol);
    const auto path = sample_path(chain, order.length(), seed);
    return matrix_from_path(b, order, f, path);
}

double schatten_norm(const Matrix& m, double p, const Tolerances& tol) {
    if (!(p > 0.0)) fail(ErrorCode::InvalidArgument, "Schatten index must be positive");
    if (!m.square()) fail(ErrorCode::DimensionMismatch, "Schatten norm of a non-square matrix");
    Vector values;
    if (is_symmetric(m)) {
        values = symmetric_eigenvalues(m, tol).eigenvalues;
        for (double& v : values) v = std::abs(v);
    } else {
        values = symmetric_eigenvalues(m.transposed() * m, tol).eigenvalues;
        for (double& v : values) v = std::sqrt(std::max(0.0, v));
    }
    if (std::isinf(p)) return *std::max_element(values.begin(), values.end());
    CompensatedSum acc;
    for (double v : values) acc.add(std::pow(v, p));
    return std::pow(acc.value(), 1.0 / p);
}

Matrix gaussian_matrix(const CoefficientMatrix& b, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t d = b.dimension();
    Matrix x(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) x(i, j) = x(j, i) = rng.normal() * b(i, j);
    return x;
}

MatrixExperimentReport run_matrix_experiment(const CoefficientMatrix& b, const FillOrder& order,
                                             const MarkovChain& chain, std::span<const double> f,
                                             const MatrixExperimentConfig& cfg, const Tolerances& tol) {
    SimConfig sim{cfg.trials, cfg.seed, cfg.parallelism};
    sim.validate();
    for (double c : cfg.c_grid) {
        if (!std::isfinite(c) || c <= 0.0) fail(ErrorCode::InvalidArgument, "C grid entries must be positive");
    }

    MatrixExperimentReport report;
    report.dimension = b.dimension();
    report.lambda = contraction(chain, tol).lambda;
    report.lambda_vacuous = report.lambda >= 1.0;
    report.sigma = sigma_params(b);
    report.b_norm = schatten_norm(b.entries(), kSchattenInfinity, tol);
    report.shape = report.sigma.sigma +
                   report.sigma.sigma_star * std::sqrt(std::log(static_cast<double>(report.dimension)));

    // Validates f before any sampling.
    build_markov_matrix(b, order, chain, f, cfg.seed, tol);

    std::vector<double> norms(cfg.trials);
    for_trial_ranges(cfg.trials, cfg.parallelism, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> path(order.length());
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(cfg.seed, trial));
            sample_path_into(chain, rng, path);
            norms[trial] = schatten_norm(matrix_from_path(b, order, f, path), kSchattenInfinity, tol);
        }
    });
    report.markov = summarize_samples(norms);
    report.max_norm = *std::max_element(norms.begin(), norms.end());
    report.dominance_violations = static_cast<std::size_t>(std::count_if(
        norms.begin(), norms.end(), [&](double v) { return v > report.b_norm * (1.0 + kDominanceSlack); }));

    if (cfg.gaussian_baseline) {
        std::vector<double> gaussian(cfg.trials);
        for_trial_ranges(cfg.trials, cfg.parallelism, [&](std::size_t begin, std::size_t end) {
            for (std::size_t trial = begin; trial < end; ++trial) {
                const Matrix g = gaussian_matrix(b, derive_seed(cfg.seed ^ kGaussianMatrixStream, trial));
                gaussian[trial] = schatten_norm(g, kSchattenInfinity, tol);
            }
        });
        report.gaussian = summarize_samples(gaussian);
        if (report.gaussian.mean > 0.0) report.gaussian_ratio = report.markov.mean / report.gaussian.mean;
    }

    if (!report.lambda_vacuous) {
        if (report.shape > 0.0) report.fitted_c = report.markov.mean * std::sqrt(1.0 - report.lambda) / report.shape;
        for (double c : cfg.c_grid) {
            report.bounds.push_back({c, bound_matrix_schatten(report.sigma.sigma, report.sigma.sigma_star,
                                                              static_cast<double>(report.dimension),
                                                              report.lambda, report.b_norm, c)});
        }
    }
    return report;
}

}  // namespace mch
