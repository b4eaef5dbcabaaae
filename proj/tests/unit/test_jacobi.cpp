// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/jacobi.hpp"
#include "core/rng.hpp"
#include "support/oracles.hpp"

namespace {

using mch::Matrix;

TEST(Jacobi, KnownCharacteristicPolynomial) {
    // Eigenvalues of this matrix are 1, 2 and 4 (char. poly (x-1)(x-2)(x-4)).
    const Matrix m{{2, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    const auto r = mch::symmetric_eigenvalues(m);
    ASSERT_EQ(r.eigenvalues.size(), 3u);
    EXPECT_NEAR(r.eigenvalues[0], 4.0, 1e-10);
    EXPECT_NEAR(r.eigenvalues[1], 2.0, 1e-10);
    EXPECT_NEAR(r.eigenvalues[2], 1.0, 1e-10);
}

TEST(Jacobi, RandomSymmetricMatchesEigen) {
    mch::Rng rng(3);
    for (std::size_t n : {1u, 2u, 5u, 12u, 40u}) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-1, 1);
        }
        const auto r = mch::symmetric_eigenvalues(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(m));
        auto expected = es.eigenvalues();
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(r.eigenvalues[i], expected(static_cast<Eigen::Index>(n - 1 - i)), 1e-10) << "n=" << n;
        }
    }
}

TEST(Jacobi, SingularValuesMatchEigen) {
    mch::Rng rng(5);
    for (std::size_t n : {1u, 3u, 6u, 15u}) {
        Matrix m(n, n);
        for (double& x : m.data()) x = rng.uniform(-2, 2);
        const auto s = mch::singular_values(m);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(oracle::to_eigen(m));
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(s[i], svd.singularValues()(static_cast<Eigen::Index>(i)), 1e-11) << "n=" << n;
        }
    }
}

TEST(Jacobi, SingularValuesOfRankOne) {
    const Matrix m{{1, 2}, {2, 4}};
    const auto s = mch::singular_values(m);
    EXPECT_NEAR(s[0], 5.0, 1e-12);
    EXPECT_NEAR(s[1], 0.0, 1e-12);
}

TEST(Jacobi, RejectsAsymmetricAndOversized) {
    try {
        (void)mch::symmetric_eigenvalues(Matrix{{1, 2}, {3, 4}});
        FAIL() << "expected an error";
    } catch (const mch::Error& e) {
        EXPECT_EQ(e.code(), mch::ErrorCode::InvalidArgument);
    }
    try {
        (void)mch::symmetric_eigenvalues(Matrix::identity(513));
        FAIL() << "expected an error";
    } catch (const mch::Error& e) {
        EXPECT_EQ(e.code(), mch::ErrorCode::TooLarge);
    }
}

TEST(Jacobi, SweepCapReportsNonConvergence) {
    mch::Rng rng(1);
    Matrix m(30, 30);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = i; j < 30; ++j) m(i, j) = m(j, i) = rng.uniform(-1, 1);
    }
    mch::Tolerances tol;
    tol.jacobi_max_sweeps = 1;
    try {
        (void)mch::symmetric_eigenvalues(m, tol);
        FAIL() << "expected an error";
    } catch (const mch::Error& e) {
        EXPECT_EQ(e.code(), mch::ErrorCode::NonConvergence);
    }
}

}  // namespace
