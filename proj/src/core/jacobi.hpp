// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "core/dense.hpp"
#include "core/tolerances.hpp"

namespace mch {

struct SymmetricEigenResult {
    Vector eigenvalues;  // descending
    std::size_t sweeps = 0;
};

/// Eigenvalues of a symmetric matrix by cyclic-by-row Jacobi rotations.
/// A pair is rotated while |a_pq| exceeds tol.jacobi_rotation * ||A||_F.
/// Throws NonConvergence past tol.jacobi_max_sweeps, TooLarge past
/// tol.jacobi_max_dimension, InvalidArgument for asymmetric input.
SymmetricEigenResult symmetric_eigenvalues(const Matrix& m,
                                           const Tolerances& tol = default_tolerances());

/// Singular values (descending) by one-sided Hestenes-Jacobi on the columns.
Vector singular_values(const Matrix& m, const Tolerances& tol = default_tolerances());

}  // namespace mch
