// SPDX-License-Identifier: Apache-2.0
#include "core/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "core/error.hpp"
#include "core/lattice.hpp"
#include "core/matrix_lab.hpp"
#include "core/spectral.hpp"

namespace mch {

namespace {

// Separate streams for the chain trajectories and the Gaussian baseline.
constexpr std::uint64_t kGaussianStream = 0x6A09E667F3BCC909ULL;

std::size_t square_side(std::size_t length) {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(length))));
    if (d * d != length) {
        fail(ErrorCode::DimensionMismatch, "Schatten norm input of length " + std::to_string(length) +
                                               " is not a square matrix");
    }
    return d;
}

void require_vectors(const std::vector<Vector>& x, NormKind kind) {
    if (x.empty()) fail(ErrorCode::EmptyInput, "no vectors supplied");
    const std::size_t dim = x.front().size();
    if (dim == 0) fail(ErrorCode::EmptyInput, "vectors have dimension 0");
    for (const auto& xi : x) {
        if (xi.size() != dim) fail(ErrorCode::DimensionMismatch, "vectors must share one dimension");
    }
    if (kind == NormKind::SchattenInf) square_side(dim);
}

}  // namespace

void SimConfig::validate() const {
    if (trials == 0) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
    if (parallelism == 0) fail(ErrorCode::InvalidArgument, "parallelism must be >= 1");
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) fail(ErrorCode::InvalidArgument, "Wilson interval needs trials >= 1");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    ci.low = std::min(ci.low, p);
    ci.high = std::max(ci.high, p);
    return ci;
}

void for_trial_ranges(std::size_t trials, std::size_t parallelism,
                      const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(trials, 1));
    if (workers == 1) {
        body(0, trials);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(trials, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(body, begin, end);
    }
    for (auto& t : pool) t.join();
}

void sample_path_into(const MarkovChain& chain, Rng& rng, std::span<std::size_t> out) {
    if (out.empty()) return;
    out[0] = rng.categorical(chain.cumulative_stationary());
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = rng.categorical(chain.cumulative_row(out[k - 1]));
}

std::vector<std::size_t> sample_path(const MarkovChain& chain, std::size_t n, std::uint64_t seed) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "path length must be >= 1");
    std::vector<std::size_t> path(n);
    Rng rng(seed);
    sample_path_into(chain, rng, path);
    return path;
}

TailReport estimate_tail(const MarkovChain& chain, const FunctionFamily& funcs, std::span<const double> u_grid,
                         const SimConfig& cfg, const Tolerances& tol) {
    cfg.validate();
    if (funcs.states() != chain.size()) fail(ErrorCode::DimensionMismatch, "function family does not match chain");
    for (double u : u_grid) {
        if (!(u >= 0.0)) fail(ErrorCode::NegativeU, "u grid must be nonnegative");
    }

    std::vector<double> sums(cfg.trials);
    for_trial_ranges(cfg.trials, cfg.parallelism, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> path(funcs.steps());
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(cfg.master_seed, trial));
            sample_path_into(chain, rng, path);
            CompensatedSum s;
            for (std::size_t i = 0; i < path.size(); ++i) s.add(funcs(i, path[i]));
            sums[trial] = s.value();
        }
    });

    TailReport report;
    report.trials = cfg.trials;
    report.master_seed = cfg.master_seed;
    report.lambda = contraction(chain, tol).lambda;
    report.bound_norm = funcs.bound_norm();
    for (double u : u_grid) {
        TailRow row;
        row.u = u;
        row.threshold = u * report.bound_norm;
        row.hits = static_cast<std::size_t>(std::count_if(sums.begin(), sums.end(), [&](double s) {
            return reaches_threshold(s, row.threshold, tol);
        }));
        row.estimate = static_cast<double>(row.hits) / static_cast<double>(cfg.trials);
        row.ci = wilson_interval(row.hits, cfg.trials);
        row.bounds[static_cast<std::size_t>(TailColumn::Iid)] = assess(bound_iid_hoeffding(u));
        row.bounds[static_cast<std::size_t>(TailColumn::Healy)] = assess(bound_healy(u, report.lambda));
        row.bounds[static_cast<std::size_t>(TailColumn::Rao)] = assess(bound_rao(u, report.lambda));
        row.bounds[static_cast<std::size_t>(TailColumn::Fjs)] = assess(bound_fjs(u, report.lambda));
        report.rows.push_back(row);
    }
    return report;
}

double vector_norm(std::span<const double> v, NormKind kind) {
    switch (kind) {
        case NormKind::Euclidean: {
            CompensatedSum acc;
            for (double x : v) acc.add(x * x);
            return std::sqrt(acc.value());
        }
        case NormKind::Sup: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
        case NormKind::SchattenInf: {
            const std::size_t d = square_side(v.size());
            Matrix m(d, d);
            std::copy(v.begin(), v.end(), m.data().begin());
            return schatten_norm(m, kSchattenInfinity);
        }
    }
    return 0.0;
}

MeanEstimate summarize_samples(std::span<const double> samples) {
    if (samples.empty()) fail(ErrorCode::EmptyInput, "no samples to summarize");
    const double n = static_cast<double>(samples.size());
    MeanEstimate est;
    est.trials = samples.size();
    est.mean = pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - est.mean) * (samples[i] - est.mean);
        est.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    est.ci = Interval{est.mean - kZ95 * est.std_error, est.mean + kZ95 * est.std_error};
    return est;
}

MeanEstimate estimate_gaussian_norm(const std::vector<Vector>& x, NormKind kind, const SimConfig& cfg) {
    cfg.validate();
    require_vectors(x, kind);
    const std::size_t dim = x.front().size();
    std::vector<double> samples(cfg.trials);
    for_trial_ranges(cfg.trials, cfg.parallelism, [&](std::size_t begin, std::size_t end) {
        Vector total(dim);
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(cfg.master_seed ^ kGaussianStream, trial));
            std::fill(total.begin(), total.end(), 0.0);
            for (const auto& xi : x) {
                const double g = rng.normal();
                for (std::size_t k = 0; k < dim; ++k) total[k] += g * xi[k];
            }
            samples[trial] = vector_norm(total, kind);
        }
    });
    return summarize_samples(samples);
}

VectorTailReport estimate_vector_sum_tail(const MarkovChain& chain, const FunctionFamily& funcs,
                                          const std::vector<Vector>& x, NormKind kind,
                                          std::span<const double> thresholds, const SimConfig& cfg,
                                          const BoundConstants& constants, const Tolerances& tol) {
    cfg.validate();
    require_vectors(x, kind);
    BoundSpec{BoundKind::Rao, constants}.validate();
    if (funcs.states() != chain.size()) fail(ErrorCode::DimensionMismatch, "function family does not match chain");
    if (x.size() != funcs.steps()) {
        fail(ErrorCode::DimensionMismatch, std::to_string(x.size()) + " vectors for " +
                                               std::to_string(funcs.steps()) + " steps");
    }
    for (double t : thresholds) {
        if (!(t >= 0.0)) fail(ErrorCode::NegativeU, "thresholds must be nonnegative");
    }

    const std::size_t dim = x.front().size();
    std::vector<double> norms(cfg.trials);
    for_trial_ranges(cfg.trials, cfg.parallelism, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> path(funcs.steps());
        Vector total(dim);
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(cfg.master_seed, trial));
            sample_path_into(chain, rng, path);
            std::fill(total.begin(), total.end(), 0.0);
            for (std::size_t i = 0; i < path.size(); ++i) {
                const double f = funcs(i, path[i]);
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < dim; ++k) total[k] += f * x[i][k];
            }
            norms[trial] = vector_norm(total, kind);
        }
    });

    VectorTailReport report;
    report.gaussian = estimate_gaussian_norm(x, kind, cfg);
    report.lambda = contraction(chain, tol).lambda;
    report.constants = constants;
    for (double t : thresholds) {
        VectorTailRow row;
        row.threshold = t;
        row.u = report.gaussian.mean > 0.0 ? t / report.gaussian.mean : 0.0;
        row.hits = static_cast<std::size_t>(std::count_if(norms.begin(), norms.end(), [&](double v) {
            return t > 0.0 ? reaches_threshold(v, t, tol) : true;
        }));
        row.estimate = static_cast<double>(row.hits) / static_cast<double>(cfg.trials);
        row.ci = wilson_interval(row.hits, cfg.trials);
        const double shape = std::exp(-constants.vector_c * row.u * row.u * (1.0 - report.lambda));
        row.curve = constants.vector_l * shape;
        if (shape > 0.0) report.fitted_l = std::max(report.fitted_l, row.estimate / shape);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace mch
