// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace mch {

// Every numeric threshold used for validation, convergence and comparison.
// Defaults are the contract values; tests and the CLI pass this record
// around rather than hard-coding numbers.
struct Tolerances {
    double row_sum = 1e-9;
    double stationarity = 1e-9;
    double stationary_floor = 1e-12;
    double power_residual = 1e-12;
    std::size_t power_max_iterations = 1'000'000;
    double mean_zero = 1e-9;
    double bound_slack = 1e-12;        // |f_i(v)| <= a_i check
    double svd_offdiagonal = 1e-13;
    std::size_t svd_max_sweeps = 100;
    double jacobi_rotation = 1e-13;
    std::size_t jacobi_max_sweeps = 100;
    std::size_t jacobi_max_dimension = 512;
    long lattice_max_denominator = 1'000'000;
    double lattice_fit = 1e-12;
    double tail_boundary = 1e-9;       // relative slack on |S| >= t
    double lambda_unit = 1e-12;        // lambda this close to 1 is reported as exactly 1
    double oracle_agreement = 1e-10;   // scaled by max(1, |reference|)
};

inline const Tolerances& default_tolerances() noexcept {
    static const Tolerances tol{};
    return tol;
}

}  // namespace mch
