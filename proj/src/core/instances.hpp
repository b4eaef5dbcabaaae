// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/chain.hpp"
#include "core/dense.hpp"
#include "core/rng.hpp"

// Seeded random instances for property checks: chains with a prescribed
// stationary law, lattice-valued mean-zero families, mean-zero vectors.
namespace mch::instances {

/// Positive probability vector with entries >= floor / n before normalizing.
Vector random_distribution(std::size_t n, Rng& rng, double floor = 0.1);

/// Entries uniform on [-scale, scale].
Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0);

/// x - (pi . x) 1 for random x; satisfies sum_v pi_v x_v = 0.
Vector random_mean_zero(std::span<const double> pi, Rng& rng, double scale = 1.0);

/// Sinkhorn-scales a positive matrix to row sums pi and column sums pi.
Matrix balanced_flow(Matrix positive, std::span<const double> pi);

/// Chain with exactly this stationary law: (1-stay) * flow/pi + stay * I.
/// Generally non-reversible.
MarkovChain random_chain_with_stationary(std::span<const double> pi, Rng& rng, double stay = 0.0);

/// Zero-based nondecreasing indices of length q in [0, n).
std::vector<std::size_t> random_sorted_indices(std::size_t q, std::size_t n, Rng& rng);

struct LatticeInstance {
    MarkovChain chain;
    FunctionFamily funcs;
};

/// Random N in [2, max_states], n in [1, max_steps]; f_i = c_i g with g
/// integer in [-2, 2] taking both signs, c_i in {+-1/2, +-1, +-3/2}, and pi
/// chosen so that pi . g = 0.
LatticeInstance random_lattice_instance(std::size_t max_states, std::size_t max_steps, Rng& rng);

}  // namespace mch::instances
