// SPDX-License-Identifier: Apache-2.0
#include "core/instances.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace mch::instances {

Vector random_distribution(std::size_t n, Rng& rng, double floor) {
    Vector pi(n);
    for (double& p : pi) p = floor + rng.uniform();
    const double total = compensated_sum(pi);
    for (double& p : pi) p /= total;
    return pi;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale) {
    Matrix m(rows, cols);
    for (double& x : m.data()) x = rng.uniform(-scale, scale);
    return m;
}

Vector random_mean_zero(std::span<const double> pi, Rng& rng, double scale) {
    Vector x(pi.size());
    for (double& v : x) v = rng.uniform(-scale, scale);
    CompensatedSum mean;
    for (std::size_t i = 0; i < x.size(); ++i) mean.add(pi[i] * x[i]);
    for (double& v : x) v -= mean.value();
    return x;
}

Matrix balanced_flow(Matrix positive, std::span<const double> pi) {
    const std::size_t n = pi.size();
    if (positive.rows() != n || positive.cols() != n) {
        fail(ErrorCode::DimensionMismatch, "flow matrix does not match pi");
    }
    for (int iter = 0; iter < 100000; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += positive(i, j);
            for (std::size_t i = 0; i < n; ++i) positive(i, j) *= pi[j] / col;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double row = compensated_sum(positive.row(i));
            worst = std::max(worst, std::abs(row - pi[i]));
            for (double& x : positive.row(i)) x *= pi[i] / row;
        }
        if (worst < 1e-15) break;
    }
    return positive;
}

MarkovChain random_chain_with_stationary(std::span<const double> pi, Rng& rng, double stay) {
    const std::size_t n = pi.size();
    Matrix weights(n, n);
    for (double& x : weights.data()) x = 0.05 + rng.uniform();
    const Matrix flow = balanced_flow(std::move(weights), pi);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (1.0 - stay) * flow(i, j) / pi[i];
        a(i, i) += stay;
        // Absorb rounding so rows sum to one.
        const double row = compensated_sum(a.row(i));
        for (double& x : a.row(i)) x /= row;
    }
    return validate_chain(std::move(a), Vector(pi.begin(), pi.end()));
}

std::vector<std::size_t> random_sorted_indices(std::size_t q, std::size_t n, Rng& rng) {
    std::vector<std::size_t> w(q);
    for (auto& x : w) x = rng.index(n);
    std::sort(w.begin(), w.end());
    return w;
}

LatticeInstance random_lattice_instance(std::size_t max_states, std::size_t max_steps, Rng& rng) {
    const std::size_t n_states = 2 + rng.index(max_states - 1);
    const std::size_t n_steps = 1 + rng.index(max_steps);

    std::vector<int> g(n_states);
    for (;;) {
        for (int& x : g) x = static_cast<int>(rng.index(5)) - 2;
        const bool has_pos = std::any_of(g.begin(), g.end(), [](int x) { return x > 0; });
        const bool has_neg = std::any_of(g.begin(), g.end(), [](int x) { return x < 0; });
        if (has_pos && has_neg) break;
    }

    Vector pi(n_states);
    for (double& p : pi) p = 0.2 + rng.uniform();
    double positive = 0.0, negative = 0.0;
    for (std::size_t v = 0; v < n_states; ++v) {
        if (g[v] > 0) positive += pi[v] * g[v];
        if (g[v] < 0) negative -= pi[v] * g[v];
    }
    for (std::size_t v = 0; v < n_states; ++v) {
        if (g[v] > 0) pi[v] *= negative / positive;
    }
    const double total = compensated_sum(pi);
    for (double& p : pi) p /= total;

    const double stay = 0.6 * rng.uniform();
    MarkovChain chain = random_chain_with_stationary(pi, rng, stay);

    static constexpr double kScales[] = {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5};
    Matrix values(n_steps, n_states);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double c = kScales[rng.index(6)];
        for (std::size_t v = 0; v < n_states; ++v) values(i, v) = c * g[v];
    }
    return LatticeInstance{std::move(chain), FunctionFamily(std::move(values))};
}

}  // namespace mch::instances
