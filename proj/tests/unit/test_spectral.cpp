// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "core/chain.hpp"
#include "core/error.hpp"
#include "core/instances.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "support/oracles.hpp"

namespace {

using mch::Matrix;
using mch::NormIndex;
using mch::Vector;

TEST(Spectral, AveragingChainHasZeroLambda) {
    const auto chain = mch::validate_chain(Matrix{{0.4, 0.6}, {0.4, 0.6}});
    EXPECT_NEAR(mch::contraction(chain).lambda, 0.0, 1e-12);
}

TEST(Spectral, TwoStateLambda) {
    for (int i = 0; i < 10; ++i) {
        const double lambda = 0.1 * i;
        EXPECT_NEAR(mch::contraction(mch::two_state_chain(lambda)).lambda, lambda, 1e-10);
    }
}

TEST(Spectral, SwapChainHasLambdaOne) {
    const auto chain = mch::validate_chain(Matrix{{0, 1}, {1, 0}}, Vector{0.5, 0.5});
    const auto c = mch::contraction(chain);
    EXPECT_EQ(c.lambda, 1.0);
    EXPECT_TRUE(c.vacuous());
}

TEST(Spectral, DeterministicCycleHasLambdaOne) {
    const auto chain = mch::validate_chain(Matrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    EXPECT_EQ(mch::contraction(chain).lambda, 1.0);
}

TEST(Spectral, LambdaMatchesEigenOnRandomChains) {
    mch::Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        const Vector pi = mch::instances::random_distribution(2 + rng.index(6), rng);
        const auto chain = mch::instances::random_chain_with_stationary(pi, rng, 0.5 * rng.uniform());
        EXPECT_NEAR(mch::contraction(chain).lambda, oracle::lambda(chain.transition(), pi), 1e-10);
    }
}

TEST(Spectral, OpnormBasics) {
    const mch::NormContext ctx(Vector{0.2, 0.3, 0.5});
    for (NormIndex p : {NormIndex::One, NormIndex::Two, NormIndex::Infinity}) {
        EXPECT_NEAR(mch::opnorm(Matrix::identity(3), ctx, p), 1.0, 1e-12);
    }
    const mch::AveragingOperator e(ctx.pi());
    EXPECT_NEAR(mch::opnorm(e.matrix(), ctx, NormIndex::Infinity), 1.0, 1e-12);
    EXPECT_NEAR(mch::opnorm(e.matrix(), ctx, NormIndex::One), 1.0, 1e-12);
    EXPECT_NEAR(mch::opnorm(e.matrix(), ctx, NormIndex::Two), 1.0, 1e-12);
}

TEST(Spectral, UniformWeightsGivePlainSingularValue) {
    mch::Rng rng(2);
    const mch::NormContext ctx(Vector(4, 0.25));
    for (int t = 0; t < 20; ++t) {
        const Matrix m = mch::instances::random_matrix(4, 4, rng);
        EXPECT_NEAR(mch::opnorm(m, ctx, NormIndex::Two), oracle::largest_singular_value(oracle::to_eigen(m)), 1e-11);
    }
}

TEST(Spectral, OpnormAgainstDefinitions) {
    mch::Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + rng.index(5);
        const Vector pi = mch::instances::random_distribution(n, rng);
        const mch::NormContext ctx(pi);
        const Matrix m = mch::instances::random_matrix(n, n, rng, 3.0);
        double inf = 0.0, one = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0, col = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += std::abs(m(i, j));
                col += pi[j] * std::abs(m(j, i));
            }
            inf = std::max(inf, row);
            one = std::max(one, col / pi[i]);
        }
        EXPECT_NEAR(mch::opnorm(m, ctx, NormIndex::Infinity), inf, 1e-12);
        EXPECT_NEAR(mch::opnorm(m, ctx, NormIndex::One), one, 1e-12);
        EXPECT_NEAR(mch::opnorm(m, ctx, NormIndex::Two), oracle::weighted_two_norm(m, pi), 1e-10);
    }
}

TEST(Spectral, InterpolationInequality) {
    mch::Rng rng(6);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.index(6);
        const mch::NormContext ctx(mch::instances::random_distribution(n, rng));
        const Matrix m = mch::instances::random_matrix(n, n, rng, 5.0);
        const double two = mch::opnorm(m, ctx, NormIndex::Two);
        EXPECT_LE(two * two,
                  mch::opnorm(m, ctx, NormIndex::One) * mch::opnorm(m, ctx, NormIndex::Infinity) + 1e-9);
    }
}

TEST(Spectral, OpnormDimensionMismatch) {
    const mch::NormContext ctx(Vector{0.5, 0.5});
    try {
        (void)mch::opnorm(Matrix::identity(3), ctx, NormIndex::Two);
        FAIL();
    } catch (const mch::Error& e) {
        EXPECT_EQ(e.code(), mch::ErrorCode::DimensionMismatch);
    }
}

TEST(Spectral, PowerDeviation) {
    mch::Rng rng(9);
    const Vector pi = mch::instances::random_distribution(4, rng);
    const auto chain = mch::instances::random_chain_with_stationary(pi, rng);
    const Matrix e = mch::averaging_operator(chain).matrix();
    EXPECT_LE(mch::max_abs_difference(mch::power_deviation(chain, 1), chain.transition() - e), 1e-15);

    const double lambda = mch::contraction(chain).lambda;
    const mch::NormContext ctx(pi);
    Matrix power = chain.transition() - e;
    Matrix running = power;
    for (std::size_t k = 1; k <= 20; ++k) {
        const Matrix dev = mch::power_deviation(chain, k);
        EXPECT_LE(mch::max_abs_difference(dev, running), 1e-10) << "k=" << k;
        EXPECT_LE(mch::opnorm(dev, ctx, NormIndex::Two), std::pow(lambda, k) + 1e-9) << "k=" << k;
        running = running * power;
    }
}

TEST(Spectral, PowerDeviationOfAveragingChainVanishes) {
    const auto chain = mch::two_state_chain(0.0);
    for (std::size_t k = 1; k < 5; ++k) {
        const Matrix dev = mch::power_deviation(chain, k);
        for (double x : dev.data()) EXPECT_NEAR(x, 0.0, 1e-15);
    }
}

TEST(Spectral, ConjugateByWeights) {
    const Matrix m{{1, 2}, {3, 4}};
    const Matrix c = mch::conjugate_by_weights(m, Vector{0.25, 0.75});
    EXPECT_NEAR(c(0, 1), 2 * std::sqrt(0.25 / 0.75), 1e-15);
    EXPECT_NEAR(c(1, 0), 3 * std::sqrt(0.75 / 0.25), 1e-15);
}

}  // namespace
