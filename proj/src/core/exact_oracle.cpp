// SPDX-License-Identifier: Apache-2.0
#include "core/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/bounds.hpp"
#include "core/error.hpp"
#include "core/spectral.hpp"

namespace mch {

namespace {

void require_compatible(const MarkovChain& chain, const FunctionFamily& funcs) {
    if (funcs.states() != chain.size()) {
        fail(ErrorCode::DimensionMismatch, "function family has " + std::to_string(funcs.states()) +
                                               " states, chain has " + std::to_string(chain.size()));
    }
}

void require_finite(double x, const char* where) {
    if (!std::isfinite(x)) fail(ErrorCode::Overflow, std::string("overflow in ") + where);
}

std::size_t trajectory_count(std::size_t states, std::size_t n) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (count > kMaxTrajectories / states) {
            fail(ErrorCode::TooLarge, std::to_string(states) + "^" + std::to_string(n) +
                                          " trajectories exceed the enumeration cap");
        }
        count *= states;
    }
    return count;
}

struct OffsetRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

OffsetRange step_range(const LatticeEmbedding& lattice, std::size_t step) {
    OffsetRange r{lattice.offset(step, 0), lattice.offset(step, 0)};
    for (std::size_t v = 1; v < lattice.states; ++v) {
        r.lo = std::min(r.lo, lattice.offset(step, v));
        r.hi = std::max(r.hi, lattice.offset(step, v));
    }
    return r;
}

OffsetRange sum_range(const LatticeEmbedding& lattice, std::size_t steps) {
    OffsetRange total;
    for (std::size_t i = 0; i < steps; ++i) {
        const OffsetRange r = step_range(lattice, i);
        total.lo += r.lo;
        total.hi += r.hi;
    }
    return total;
}

void require_pi_mean_zero(std::span<const double> pi, const Vector& u, const Tolerances& tol) {
    if (u.size() != pi.size()) fail(ErrorCode::DimensionMismatch, "vector length differs from pi");
    CompensatedSum mean;
    for (std::size_t i = 0; i < pi.size(); ++i) mean.add(pi[i] * u[i]);
    if (std::abs(mean.value()) > tol.mean_zero) {
        fail(ErrorCode::NotMeanZero, "vector has pi-mean " + std::to_string(mean.value()));
    }
}

double sup_norm(const Vector& u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

void hadamard_in_place(Vector& x, std::span<const double> d) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= d[i];
}

}  // namespace

double exact_monomial_expectation(const MarkovChain& chain, const FunctionFamily& funcs,
                                  std::span<const std::size_t> w) {
    require_compatible(chain, funcs);
    if (!std::is_sorted(w.begin(), w.end())) fail(ErrorCode::Unsorted, "index vector w must be nondecreasing");
    if (w.empty()) return 1.0;
    if (w.back() >= funcs.steps()) fail(ErrorCode::OutOfRange, "index vector w exceeds the number of steps");

    Vector p = chain.stationary();
    hadamard_in_place(p, funcs.step(w[0]));
    for (std::size_t i = 1; i < w.size(); ++i) {
        for (std::size_t gap = w[i] - w[i - 1]; gap > 0; --gap) p = left_multiply(p, chain.transition());
        hadamard_in_place(p, funcs.step(w[i]));
    }
    return compensated_sum(p);
}

MomentTable exact_moments(const MarkovChain& chain, const FunctionFamily& funcs, int q) {
    require_compatible(chain, funcs);
    if (q < 0) fail(ErrorCode::InvalidArgument, "moment order must be >= 0");
    if (q > kMaxMomentOrder) {
        fail(ErrorCode::TooLarge, "moment order capped at " + std::to_string(kMaxMomentOrder));
    }
    const std::size_t n_states = chain.size();
    const auto orders = static_cast<std::size_t>(q) + 1;
    const Matrix& a = chain.transition();

    // binom[m][j]; exact in double for m <= 32.
    std::vector<Vector> binom(orders, Vector(orders, 0.0));
    for (std::size_t m = 0; m < orders; ++m) {
        binom[m][0] = 1.0;
        for (std::size_t j = 1; j <= m; ++j) binom[m][j] = binom[m - 1][j - 1] + (j < m ? binom[m - 1][j] : 0.0);
    }

    auto powers_of = [&](std::size_t step) {
        Matrix pw(n_states, orders);
        for (std::size_t v = 0; v < n_states; ++v) {
            double x = 1.0;
            for (std::size_t m = 0; m < orders; ++m) {
                pw(v, m) = x;
                x *= funcs(step, v);
            }
        }
        return pw;
    };

    // state(v, m) = E[S_k^m 1{Y_k = v}]
    Matrix pw = powers_of(0);
    Matrix state(n_states, orders);
    for (std::size_t v = 0; v < n_states; ++v)
        for (std::size_t m = 0; m < orders; ++m) state(v, m) = chain.stationary()[v] * pw(v, m);

    for (std::size_t k = 1; k < funcs.steps(); ++k) {
        pw = powers_of(k);
        Matrix moved(n_states, orders);
        for (std::size_t target = 0; target < n_states; ++target) {
            for (std::size_t m = 0; m < orders; ++m) {
                CompensatedSum acc;
                for (std::size_t v = 0; v < n_states; ++v) acc.add(state(v, m) * a(v, target));
                moved(target, m) = acc.value();
            }
        }
        Matrix next(n_states, orders);
        for (std::size_t target = 0; target < n_states; ++target) {
            for (std::size_t m = 0; m < orders; ++m) {
                CompensatedSum acc;
                for (std::size_t j = 0; j <= m; ++j) acc.add(binom[m][j] * pw(target, j) * moved(target, m - j));
                next(target, m) = acc.value();
            }
        }
        state = std::move(next);
    }

    MomentTable table{q, Vector(orders, 0.0)};
    for (std::size_t m = 0; m < orders; ++m) {
        CompensatedSum acc;
        for (std::size_t v = 0; v < n_states; ++v) acc.add(state(v, m));
        table.moments[m] = acc.value();
        require_finite(table.moments[m], "moment recursion");
    }
    return table;
}

double exact_mgf(const MarkovChain& chain, const FunctionFamily& funcs, double theta) {
    require_compatible(chain, funcs);
    if (!std::isfinite(theta)) fail(ErrorCode::InvalidArgument, "theta must be finite");
    Vector p = chain.stationary();
    Vector tilt(chain.size());
    for (std::size_t i = 0; i < funcs.steps(); ++i) {
        for (std::size_t v = 0; v < chain.size(); ++v) {
            tilt[v] = std::exp(theta * funcs(i, v));
            require_finite(tilt[v], "MGF tilt");
        }
        hadamard_in_place(p, tilt);
        if (i + 1 < funcs.steps()) p = left_multiply(p, chain.transition());
        for (double x : p) require_finite(x, "MGF recursion");
    }
    const double result = compensated_sum(p);
    require_finite(result, "MGF sum");
    return result;
}

LatticeDistribution exact_distribution(const MarkovChain& chain, const FunctionFamily& funcs,
                                       const Tolerances& tol) {
    require_compatible(chain, funcs);
    const LatticeEmbedding lattice = embed_on_lattice(funcs, tol);
    const std::size_t n_states = chain.size();
    const OffsetRange total = sum_range(lattice, funcs.steps());
    const auto full_width = static_cast<std::size_t>(total.hi - total.lo + 1);
    if (full_width > kMaxLatticeCells / n_states) {
        fail(ErrorCode::TooLarge, "lattice support of " + std::to_string(full_width) + " points x " +
                                      std::to_string(n_states) + " states is too large");
    }
    const Matrix& a = chain.transition();

    // mass(v, s - lo) = Pr[Y_k = v, offset sum = s]
    OffsetRange range = step_range(lattice, 0);
    auto width = static_cast<std::size_t>(range.hi - range.lo + 1);
    Matrix mass(n_states, width);
    for (std::size_t v = 0; v < n_states; ++v) {
        mass(v, static_cast<std::size_t>(lattice.offset(0, v) - range.lo)) += chain.stationary()[v];
    }

    for (std::size_t k = 1; k < funcs.steps(); ++k) {
        const OffsetRange step = step_range(lattice, k);
        const OffsetRange next_range{range.lo + step.lo, range.hi + step.hi};
        const auto next_width = static_cast<std::size_t>(next_range.hi - next_range.lo + 1);
        Matrix next(n_states, next_width);
        for (std::size_t target = 0; target < n_states; ++target) {
            const auto shift = static_cast<std::size_t>(lattice.offset(k, target) - step.lo);
            for (std::size_t s = 0; s < width; ++s) {
                CompensatedSum acc;
                for (std::size_t v = 0; v < n_states; ++v) acc.add(mass(v, s) * a(v, target));
                next(target, s + shift) = acc.value();
            }
        }
        mass = std::move(next);
        range = next_range;
        width = next_width;
    }

    std::vector<double> probabilities(width, 0.0);
    for (std::size_t s = 0; s < width; ++s) {
        CompensatedSum acc;
        for (std::size_t v = 0; v < n_states; ++v) acc.add(mass(v, s));
        probabilities[s] = acc.value();
    }
    return LatticeDistribution(lattice.pitch, range.lo, std::move(probabilities));
}

double exact_tail(const MarkovChain& chain, const FunctionFamily& funcs, double threshold, const Tolerances& tol) {
    if (!std::isfinite(threshold)) fail(ErrorCode::InvalidArgument, "threshold must be finite");
    return exact_distribution(chain, funcs, tol).tail(threshold, tol);
}

void for_each_trajectory(const MarkovChain& chain, std::size_t n,
                         const std::function<void(std::span<const std::size_t>, double)>& visit) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "trajectory length must be >= 1");
    trajectory_count(chain.size(), n);
    const std::size_t n_states = chain.size();
    const Matrix& a = chain.transition();
    std::vector<std::size_t> path(n, 0);
    std::vector<double> prefix(n, 0.0);

    // Odometer over [N]^n; prefix[i] is the probability of path[0..i].
    std::size_t depth = 0;
    path[0] = 0;
    for (;;) {
        prefix[depth] = depth == 0 ? chain.stationary()[path[0]]
                                   : prefix[depth - 1] * a(path[depth - 1], path[depth]);
        if (depth + 1 < n) {
            ++depth;
            path[depth] = 0;
            continue;
        }
        visit(path, prefix[depth]);
        while (path[depth] + 1 == n_states) {
            if (depth == 0) return;
            --depth;
        }
        ++path[depth];
    }
}

LatticeDistribution brute_force_distribution(const MarkovChain& chain, const FunctionFamily& funcs,
                                             const Tolerances& tol) {
    require_compatible(chain, funcs);
    const LatticeEmbedding lattice = embed_on_lattice(funcs, tol);
    const OffsetRange total = sum_range(lattice, funcs.steps());
    std::vector<CompensatedSum> bins(static_cast<std::size_t>(total.hi - total.lo + 1));

    for_each_trajectory(chain, funcs.steps(), [&](std::span<const std::size_t> path, double probability) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < path.size(); ++i) s += lattice.offset(i, path[i]);
        bins[static_cast<std::size_t>(s - total.lo)].add(probability);
    });

    std::vector<double> probabilities(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) probabilities[k] = bins[k].value();
    return LatticeDistribution(lattice.pitch, total.lo, std::move(probabilities));
}

InequalityCheck verify_holder_application(std::span<const double> pi, const std::vector<Vector>& u,
                                          const std::vector<Matrix>& t, const Tolerances& tol) {
    if (t.empty()) fail(ErrorCode::InvalidArgument, "need k >= 1 matrices");
    if (u.size() != t.size() + 1) fail(ErrorCode::DimensionMismatch, "need exactly k+1 vectors for k matrices");
    for (const auto& ui : u) require_pi_mean_zero(pi, ui, tol);
    const NormContext ctx(Vector(pi.begin(), pi.end()), tol);
    const AveragingOperator e(pi);

    // v <- U_{k+1} 1, then v <- U_j (T_j + E) v for j = k..1.
    Vector v = u.back();
    for (std::size_t j = t.size(); j-- > 0;) {
        v = multiply(t[j] + e.matrix(), v);
        hadamard_in_place(v, u[j]);
    }
    const Vector ones(pi.size(), 1.0);
    const double lhs = std::abs(ctx.inner(ones, v));

    double sup_product = 1.0;
    for (const auto& ui : u) sup_product *= sup_norm(ui);
    Vector norms(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) norms[j] = opnorm(t[j], ctx, NormIndex::Two, tol);

    const AdmissibleStrings strings = enumerate_admissible_strings(static_cast<int>(t.size()) + 1);
    CompensatedSum sum;
    for (std::uint32_t mask : strings.masks()) {
        double term = 1.0;
        for (int j = 0; j < strings.length(); ++j) {
            if (AdmissibleStrings::bit(mask, j)) term *= norms[static_cast<std::size_t>(j)];
        }
        sum.add(term);
    }
    return InequalityCheck{lhs, sup_product * sum.value()};
}

FactorizationCheck verify_averaging_split(std::span<const double> pi, const std::vector<Matrix>& r) {
    if (r.empty()) fail(ErrorCode::InvalidArgument, "need k >= 1 matrices");
    const NormContext ctx(Vector(pi.begin(), pi.end()));
    const AveragingOperator e(pi);
    const Vector ones(pi.size(), 1.0);

    Vector v = multiply(r.back(), ones);
    for (std::size_t i = r.size() - 1; i-- > 0;) v = multiply(r[i], multiply(e.matrix(), v));

    FactorizationCheck out;
    out.lhs = ctx.inner(ones, v);
    out.product = 1.0;
    out.rhs = 1.0;
    for (const auto& ri : r) {
        const Vector image = multiply(ri, ones);
        out.product *= ctx.inner(ones, image);
        out.rhs *= ctx.norm(image, NormIndex::One);
    }
    return out;
}

InequalityCheck verify_diagonal_chain(std::span<const double> pi, const std::vector<Vector>& u,
                                      const std::vector<Matrix>& t, const Tolerances& tol) {
    if (u.empty()) fail(ErrorCode::InvalidArgument, "need k >= 1 vectors");
    if (t.size() + 1 != u.size()) fail(ErrorCode::DimensionMismatch, "need exactly k-1 matrices for k vectors");
    const NormContext ctx(Vector(pi.begin(), pi.end()), tol);

    Vector v = u.back();
    for (std::size_t j = t.size(); j-- > 0;) {
        v = multiply(t[j], v);
        hadamard_in_place(v, u[j]);
    }
    double rhs = sup_norm(u.back());
    for (std::size_t i = 0; i < t.size(); ++i) rhs *= sup_norm(u[i]) * opnorm(t[i], ctx, NormIndex::Two, tol);
    return InequalityCheck{ctx.norm(v, NormIndex::One), rhs};
}

}  // namespace mch
