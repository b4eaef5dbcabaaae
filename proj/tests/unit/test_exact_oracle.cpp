// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "core/bounds.hpp"
#include "core/chain.hpp"
#include "core/error.hpp"
#include "core/exact_oracle.hpp"
#include "core/instances.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "support/oracles.hpp"

namespace {

using mch::ErrorCode;
using mch::Matrix;
using mch::Vector;

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const mch::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

TEST(ExactMonomial, SingleFactorIsZero) {
    const auto chain = mch::two_state_chain(0.4);
    const auto f = mch::two_state_functions(5);
    for (std::size_t i = 0; i < 5; ++i) {
        const std::vector<std::size_t> w{i};
        EXPECT_NEAR(mch::exact_monomial_expectation(chain, f, w), 0.0, 1e-15);
    }
}

TEST(ExactMonomial, TwoStateCorrelation) {
    for (double lambda : {0.0, 0.3, 0.5, 0.9}) {
        const auto chain = mch::two_state_chain(lambda);
        const auto f = mch::two_state_functions(8);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = i; j < 8; ++j) {
                const std::vector<std::size_t> w{i, j};
                EXPECT_NEAR(mch::exact_monomial_expectation(chain, f, w), std::pow(lambda, j - i), 1e-14);
            }
        }
    }
}

TEST(ExactMonomial, MatchesEnumeration) {
    mch::Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const auto inst = mch::instances::random_lattice_instance(4, 5, rng);
        const auto f = oracle::rows_of(inst.funcs.values());
        const auto w = mch::instances::random_sorted_indices(1 + rng.index(4), inst.funcs.steps(), rng);
        // E[prod f_{w_k}(Y_{w_k})] with the path drawn from the recursion oracle.
        double expected = 0.0;
        const auto& a = inst.chain.transition();
        const auto& pi = inst.chain.stationary();
        const std::size_t n = inst.funcs.steps();
        const std::size_t states = pi.size();
        std::vector<std::size_t> path(n);
        std::function<void(std::size_t, double)> walk = [&](std::size_t step, double prob) {
            if (step == n) {
                double prod = 1.0;
                for (std::size_t k : w) prod *= f[k][path[k]];
                expected += prob * prod;
                return;
            }
            for (std::size_t v = 0; v < states; ++v) {
                path[step] = v;
                walk(step + 1, prob * (step == 0 ? pi[v] : a(path[step - 1], v)));
            }
        };
        walk(0, 1.0);
        EXPECT_NEAR(mch::exact_monomial_expectation(inst.chain, inst.funcs, w), expected, 1e-12);
    }
}

TEST(ExactMonomial, RejectsUnsorted) {
    const auto chain = mch::two_state_chain(0.4);
    const auto f = mch::two_state_functions(3);
    const std::vector<std::size_t> w{2, 1};
    EXPECT_EQ(code_of([&] { mch::exact_monomial_expectation(chain, f, w); }), ErrorCode::Unsorted);
}

TEST(ExactMoments, Examples) {
    const auto chain = mch::two_state_chain(0.5);
    const auto table = mch::exact_moments(chain, mch::two_state_functions(2), 2);
    ASSERT_EQ(table.moments.size(), 3u);
    EXPECT_NEAR(table.moments[0], 1.0, 1e-15);
    EXPECT_NEAR(table.moments[1], 0.0, 1e-15);
    EXPECT_NEAR(table.moments[2], 3.0, 1e-14);
}

TEST(ExactMoments, SecondMomentClosedForm) {
    for (double lambda : {0.0, 0.2, 0.7}) {
        for (std::size_t n : {1u, 5u, 12u}) {
            double expected = static_cast<double>(n);
            for (std::size_t d = 1; d < n; ++d) expected += 2.0 * (n - d) * std::pow(lambda, d);
            const auto t = mch::exact_moments(mch::two_state_chain(lambda), mch::two_state_functions(n), 2);
            EXPECT_NEAR(t.moments[2], expected, 1e-11);
        }
    }
}

TEST(ExactMoments, Guard) {
    const auto chain = mch::two_state_chain(0.5);
    EXPECT_EQ(code_of([&] { mch::exact_moments(chain, mch::two_state_functions(2), 33); }), ErrorCode::TooLarge);
}

TEST(ExactMgf, Examples) {
    const auto chain = mch::two_state_chain(0.5);
    EXPECT_NEAR(mch::exact_mgf(chain, mch::two_state_functions(6), 0.0), 1.0, 1e-15);
    EXPECT_NEAR(mch::exact_mgf(chain, mch::two_state_functions(1), 0.7), std::cosh(0.7), 1e-15);
    const auto sums = oracle::trajectory_sums(chain.transition(), chain.stationary(),
                                              oracle::rows_of(mch::two_state_functions(4).values()));
    EXPECT_NEAR(mch::exact_mgf(chain, mch::two_state_functions(4), 0.1), oracle::mgf(sums, 0.1), 1e-12);
}

TEST(ExactMgf, Overflow) {
    const auto chain = mch::two_state_chain(0.5);
    EXPECT_EQ(code_of([&] { mch::exact_mgf(chain, mch::two_state_functions(10), 100.0); }), ErrorCode::Overflow);
}

TEST(ExactTail, Examples) {
    const auto f2 = mch::two_state_functions(2);
    EXPECT_NEAR(mch::exact_tail(mch::two_state_chain(0.0), f2, 2.0), 0.5, 1e-15);
    EXPECT_NEAR(mch::exact_tail(mch::two_state_chain(0.5), f2, 2.0), 0.75, 1e-15);
    EXPECT_DOUBLE_EQ(mch::exact_tail(mch::two_state_chain(0.5), f2, 0.0), 1.0);
}

TEST(ExactTail, NotLattice) {
    const auto chain = mch::two_state_chain(0.5);
    const mch::FunctionFamily f(Matrix{{std::sqrt(2.0), -std::sqrt(2.0)}});
    EXPECT_EQ(code_of([&] { mch::exact_tail(chain, f, 1.0); }), ErrorCode::NotLattice);
}

TEST(ExactDistribution, SingleStepIsLawUnderPi) {
    const auto chain = mch::validate_chain(Matrix{{0.7, 0.3}, {0.2, 0.8}});
    const mch::FunctionFamily f(Matrix{{0.6, -0.4}});
    const auto d = mch::exact_distribution(chain, f);
    // Lattice of pitch 0.2 from -0.4 to 0.6; only the two endpoints carry mass.
    ASSERT_EQ(d.support_size(), 6u);
    EXPECT_NEAR(d.value(0), -0.4, 1e-15);
    EXPECT_NEAR(d.probabilities()[0], 0.6, 1e-12);
    EXPECT_NEAR(d.value(5), 0.6, 1e-15);
    EXPECT_NEAR(d.probabilities()[5], 0.4, 1e-12);
    for (std::size_t k = 1; k < 5; ++k) EXPECT_EQ(d.probabilities()[k], 0.0);
}

TEST(ExactDistribution, AgreesWithEnumerationOracle) {
    mch::Rng rng(43);
    for (int t = 0; t < 30; ++t) {
        const auto inst = mch::instances::random_lattice_instance(4, 7, rng);
        const auto sums = oracle::trajectory_sums(inst.chain.transition(), inst.chain.stationary(),
                                                  oracle::rows_of(inst.funcs.values()));
        const auto dp = mch::exact_distribution(inst.chain, inst.funcs);
        const auto brute = mch::brute_force_distribution(inst.chain, inst.funcs);
        EXPECT_NEAR(dp.total(), 1.0, 1e-12);
        for (std::size_t k = 0; k < brute.support_size(); ++k) {
            const double threshold = std::abs(brute.value(k));
            const double expected = oracle::tail(sums, threshold);
            EXPECT_NEAR(dp.tail(threshold), expected, 1e-10);
            EXPECT_NEAR(brute.tail(threshold), expected, 1e-10);
        }
        const auto table = mch::exact_moments(inst.chain, inst.funcs, 6);
        for (int m = 0; m <= 6; ++m) {
            const double ref = oracle::moment(sums, m);
            EXPECT_NEAR(table.moments[m], ref, 1e-10 * std::max(1.0, std::abs(ref))) << "m=" << m;
        }
        for (double theta : {-0.4, 0.25}) {
            const double ref = oracle::mgf(sums, theta);
            EXPECT_NEAR(mch::exact_mgf(inst.chain, inst.funcs, theta), ref, 1e-10 * std::max(1.0, ref));
        }
    }
}

TEST(Trajectories, ProbabilitiesSumToOne) {
    const auto chain = mch::validate_chain(Matrix{{0.5, 0.25, 0.25}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}});
    double total = 0.0;
    std::size_t count = 0;
    mch::for_each_trajectory(chain, 5, [&](std::span<const std::size_t> path, double p) {
        EXPECT_EQ(path.size(), 5u);
        total += p;
        ++count;
    });
    EXPECT_EQ(count, 243u);
    EXPECT_NEAR(total, 1.0, 1e-13);
}

TEST(Trajectories, Guard) {
    const auto chain = mch::two_state_chain(0.5);
    EXPECT_EQ(code_of([&] { mch::for_each_trajectory(chain, 40, [](auto, double) {}); }), ErrorCode::TooLarge);
    EXPECT_EQ(code_of([&] { mch::brute_force_distribution(chain, mch::two_state_functions(40)); }),
              ErrorCode::TooLarge);
}

TEST(Appendix, HolderZeroTermsAndTightCase) {
    const Vector pi{0.5, 0.5};
    const std::vector<Vector> u{{1, -1}, {1, -1}};
    const auto zero = mch::verify_holder_application(pi, u, {Matrix(2, 2)});
    EXPECT_NEAR(zero.lhs, 0.0, 1e-15);
    EXPECT_NEAR(zero.rhs, 0.0, 1e-15);

    const auto chain = mch::two_state_chain(0.5);
    const auto tight = mch::verify_holder_application(pi, u, {mch::power_deviation(chain, 1)});
    EXPECT_NEAR(tight.lhs, 0.5, 1e-14);
    EXPECT_NEAR(tight.rhs, 0.5, 1e-14);
}

TEST(Appendix, HolderRejectsNonMeanZero) {
    const Vector pi{0.5, 0.5};
    EXPECT_EQ(code_of([&] { mch::verify_holder_application(pi, {{1, 0}, {1, -1}}, {Matrix(2, 2)}); }),
              ErrorCode::NotMeanZero);
    EXPECT_EQ(code_of([&] { mch::verify_holder_application(pi, {{1, -1}}, {Matrix(2, 2)}); }),
              ErrorCode::DimensionMismatch);
}

TEST(Appendix, RandomInstancesHold) {
    mch::Rng rng(47);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng.index(5);
        const std::size_t k = 1 + rng.index(4);
        const Vector pi = mch::instances::random_distribution(n, rng);
        std::vector<Vector> u(k + 1);
        for (auto& x : u) x = mch::instances::random_mean_zero(pi, rng);
        std::vector<Matrix> tm(k);
        for (auto& m : tm) m = mch::instances::random_matrix(n, n, rng);
        const auto h = mch::verify_holder_application(pi, u, tm);
        EXPECT_LE(h.lhs, h.rhs + 1e-9);

        const auto s = mch::verify_averaging_split(pi, tm);
        EXPECT_NEAR(s.lhs, s.product, 1e-9 * std::max(1.0, std::abs(s.product)));
        EXPECT_LE(std::abs(s.lhs), s.rhs + 1e-9);

        u.pop_back();
        tm.pop_back();
        const auto d = mch::verify_diagonal_chain(pi, u, tm);
        EXPECT_LE(d.lhs, d.rhs + 1e-9);
    }
}

TEST(Appendix, AveragingSplitExample) {
    // With R_1 = R_2 = I the split is <1, E 1> = 1 = <1,1><1,1>.
    const Vector pi{0.3, 0.7};
    const auto s = mch::verify_averaging_split(pi, {Matrix::identity(2), Matrix::identity(2)});
    EXPECT_NEAR(s.lhs, 1.0, 1e-15);
    EXPECT_NEAR(s.product, 1.0, 1e-15);
    EXPECT_NEAR(s.rhs, 1.0, 1e-15);
}

TEST(Bounds, ExactValuesRespectClosedForms) {
    mch::Rng rng(53);
    for (int t = 0; t < 15; ++t) {
        const auto inst = mch::instances::random_lattice_instance(4, 7, rng);
        const double lambda = mch::contraction(inst.chain).lambda;
        if (lambda >= 1.0) continue;
        const auto table = mch::exact_moments(inst.chain, inst.funcs, 12);
        for (int q = 2; q <= 12; q += 2) {
            EXPECT_LE(table.moments[q], mch::bound_moment(q, lambda, inst.funcs.bounds()));
        }
        const double norm = inst.funcs.bound_norm();
        const auto dist = mch::exact_distribution(inst.chain, inst.funcs);
        for (double u = 0.5; u <= 8.0; u += 0.5) {
            EXPECT_LE(dist.tail(u * norm), mch::bound_rao(u, lambda));
            EXPECT_LE(dist.tail(u * norm), mch::bound_fjs(u, lambda));
        }
    }
}

}  // namespace
