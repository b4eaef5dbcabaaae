// SPDX-License-Identifier: Apache-2.0
#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "core/bounds.hpp"
#include "core/error.hpp"
#include "core/exact_oracle.hpp"
#include "core/instances.hpp"
#include "core/lattice.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace mch {

namespace {

constexpr std::size_t kMaxPower = 20;
constexpr std::size_t kBruteForceCap = 100'000;
constexpr std::size_t kRandomCases = 300;

class Recorder {
public:
    Recorder(std::string suite, std::string name) {
        check_.suite = std::move(suite);
        check_.name = std::move(name);
        check_.margin = -INFINITY;
    }

    // Records lhs <= rhs + slack.
    void le(double lhs, double rhs, double slack) {
        ++check_.cases;
        const double margin = lhs - rhs;
        if (!(margin <= slack)) ++check_.violations;
        if (std::isnan(margin)) {
            check_.margin = NAN;
        } else if (!std::isnan(check_.margin)) {
            check_.margin = std::max(check_.margin, margin);
        }
    }

    void close(double actual, double expected, double slack) {
        le(std::abs(actual - expected), 0.0, slack);
    }

    VerifyCheck skip(std::string why) {
        check_.skipped = true;
        check_.note = std::move(why);
        check_.margin = 0.0;
        return std::move(check_);
    }

    void note(std::string text) { check_.note = std::move(text); }

    VerifyCheck done() {
        if (check_.cases == 0) check_.margin = 0.0;
        return std::move(check_);
    }

private:
    VerifyCheck check_;
};

bool wants(VerifySuite selected, VerifySuite suite) {
    return selected == VerifySuite::All || selected == suite;
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
    std::size_t value = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (value > cap / base) return cap + 1;
        value *= base;
    }
    return value;
}

// ---- chain ----

VerifyCheck check_power_stochastic(const MarkovChain& chain) {
    Recorder rec("chain", "power_stochastic");
    const Vector& pi = chain.stationary();
    Matrix power = Matrix::identity(chain.size());
    for (std::size_t k = 1; k <= kMaxPower; ++k) {
        power = power * chain.transition();
        for (std::size_t i = 0; i < power.rows(); ++i) {
            rec.close(compensated_sum(power.row(i)), 1.0, 1e-9);
        }
        const Vector moved = left_multiply(pi, power);
        for (std::size_t j = 0; j < pi.size(); ++j) rec.close(moved[j], pi[j], 1e-9);
    }
    return rec.done();
}

VerifyCheck check_averaging_identities(const MarkovChain& chain) {
    Recorder rec("chain", "averaging_identities");
    const Matrix& e = averaging_operator(chain).matrix();
    const Matrix& a = chain.transition();
    rec.le(max_abs_difference(e * e, e), 0.0, 1e-12);
    rec.le(max_abs_difference(a * e, e), 0.0, 1e-12);
    rec.le(max_abs_difference(e * a, e), 0.0, 1e-9);
    return rec.done();
}

// ---- spectral ----

VerifyCheck check_power_identity(const MarkovChain& chain) {
    Recorder rec("spectral", "power_deviation_identity");
    const Matrix deviation = chain.transition() - averaging_operator(chain).matrix();
    Matrix power = deviation;
    for (std::size_t k = 1; k <= kMaxPower; ++k) {
        if (k > 1) power = power * deviation;
        rec.le(max_abs_difference(power_deviation(chain, k), power), 0.0, 1e-10);
    }
    return rec.done();
}

VerifyCheck check_power_decay(const MarkovChain& chain, double lambda, const Tolerances& tol) {
    Recorder rec("spectral", "power_deviation_decay");
    const NormContext ctx(chain.stationary(), tol);
    for (std::size_t k = 1; k <= kMaxPower; ++k) {
        const double norm = opnorm(power_deviation(chain, k), ctx, NormIndex::Two, tol);
        rec.le(norm, std::pow(lambda, static_cast<double>(k)), 1e-9);
    }
    return rec.done();
}

VerifyCheck check_interpolation(const MarkovChain& chain, Rng& rng, const Tolerances& tol) {
    Recorder rec("spectral", "norm_interpolation");
    const NormContext ctx(chain.stationary(), tol);
    const std::size_t n = chain.size();
    for (std::size_t c = 0; c < kRandomCases; ++c) {
        const Matrix t = instances::random_matrix(n, n, rng, 1.0 + 4.0 * rng.uniform());
        const double two = opnorm(t, ctx, NormIndex::Two, tol);
        const double one = opnorm(t, ctx, NormIndex::One, tol);
        const double inf = opnorm(t, ctx, NormIndex::Infinity, tol);
        rec.le(two * two, one * inf, 1e-9);
    }
    return rec.done();
}

VerifyCheck check_relabel(const MarkovChain& chain, double lambda, Rng& rng, const Tolerances& tol) {
    Recorder rec("spectral", "relabel_invariance");
    const std::size_t n = chain.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 5; ++trial) {
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        Matrix a(n, n);
        Vector pi(n);
        for (std::size_t i = 0; i < n; ++i) {
            pi[i] = chain.stationary()[perm[i]];
            for (std::size_t j = 0; j < n; ++j) a(i, j) = chain.transition()(perm[i], perm[j]);
        }
        const double relabeled = contraction(validate_chain(std::move(a), std::move(pi), tol), tol).lambda;
        rec.close(relabeled, lambda, 1e-10 * std::max(1.0, lambda));
    }
    return rec.done();
}

// ---- oracle ----

void check_brute_force(const MarkovChain& chain, const FunctionFamily& funcs, const Tolerances& tol,
                       std::vector<VerifyCheck>& out) {
    Recorder tails("oracle", "tail_matches_enumeration");
    Recorder moments("oracle", "moments_match_enumeration");
    Recorder mgfs("oracle", "mgf_matches_enumeration");
    if (checked_power(chain.size(), funcs.steps(), kBruteForceCap) > kBruteForceCap) {
        const std::string why = "N^n exceeds " + std::to_string(kBruteForceCap);
        out.push_back(tails.skip(why));
        out.push_back(moments.skip(why));
        out.push_back(mgfs.skip(why));
        return;
    }
    const LatticeDistribution brute = brute_force_distribution(chain, funcs, tol);
    const LatticeDistribution dp = exact_distribution(chain, funcs, tol);
    for (std::size_t k = 0; k < brute.support_size(); ++k) {
        const double t = std::abs(brute.value(k));
        tails.close(exact_tail(chain, funcs, t, tol), brute.tail(t, tol), tol.oracle_agreement);
        tails.close(dp.tail(t, tol), brute.tail(t, tol), tol.oracle_agreement);
    }
    const MomentTable table = exact_moments(chain, funcs, 6);
    for (int m = 0; m <= 6; ++m) {
        const double ref = brute.moment(m);
        moments.close(table.moments[m], ref, tol.oracle_agreement * std::max(1.0, std::abs(ref)));
    }
    const double scale = 1.0 / std::max(funcs.bound_norm(), 1e-300);
    for (double theta : {-0.5, -0.1, 0.1, 0.5}) {
        const double ref = brute.mgf(theta * scale);
        mgfs.close(exact_mgf(chain, funcs, theta * scale), ref, tol.oracle_agreement * std::max(1.0, ref));
    }
    out.push_back(tails.done());
    out.push_back(moments.done());
    out.push_back(mgfs.done());
}

VerifyCheck check_monomials(const MarkovChain& chain, const FunctionFamily& funcs, double lambda, Rng& rng) {
    Recorder rec("oracle", "monomial_bound");
    std::size_t absolute_held = 0;
    for (std::size_t c = 0; c < kRandomCases; ++c) {
        const std::size_t q = 2 + rng.index(5);
        const auto w = instances::random_sorted_indices(q, funcs.steps(), rng);
        const double exact = exact_monomial_expectation(chain, funcs, w);
        const double bound = bound_monomial(w, lambda, funcs.bounds());
        rec.le(exact, bound, 1e-9);
        if (std::abs(exact) <= bound + 1e-9) ++absolute_held;
    }
    rec.note("absolute value also within bound in " + std::to_string(absolute_held) + "/" +
             std::to_string(kRandomCases) + " cases (not asserted)");
    return rec.done();
}

VerifyCheck check_moment_bound(const MarkovChain& chain, const FunctionFamily& funcs, double lambda) {
    Recorder rec("oracle", "moment_bound");
    if (lambda >= 1.0) return rec.skip("lambda >= 1");
    const MomentTable table = exact_moments(chain, funcs, 12);
    for (int q = 2; q <= 12; q += 2) {
        rec.le(table.moments[q], bound_moment(q, lambda, funcs.bounds()), 1e-9);
    }
    return rec.done();
}

void check_tail_bounds(const MarkovChain& chain, const FunctionFamily& funcs, double lambda,
                       const Tolerances& tol, std::vector<VerifyCheck>& out) {
    Recorder rao("oracle", "tail_bound_rao");
    Recorder fjs("oracle", "tail_bound_fjs");
    if (lambda >= 1.0) {
        out.push_back(rao.skip("lambda >= 1"));
        out.push_back(fjs.skip("lambda >= 1"));
        return;
    }
    std::optional<LatticeDistribution> law;
    try {
        law = exact_distribution(chain, funcs, tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotLattice && e.code() != ErrorCode::TooLarge) throw;
        out.push_back(rao.skip(e.what()));
        out.push_back(fjs.skip(e.what()));
        return;
    }
    const double norm = funcs.bound_norm();
    for (int i = 1; i <= 16; ++i) {
        const double u = 0.5 * i;
        const double tail = law->tail(u * norm, tol);
        rao.le(tail, bound_rao(u, lambda), 0.0);
        fjs.le(tail, bound_fjs(u, lambda), 0.0);
    }
    out.push_back(rao.done());
    out.push_back(fjs.done());
}

VerifyCheck check_mgf_step(const MarkovChain& chain, const FunctionFamily& funcs, double lambda) {
    Recorder rec("oracle", "mgf_step");
    if (lambda >= 1.0) return rec.skip("lambda >= 1");
    const double norm = funcs.bound_norm();
    if (norm <= 0.0) return rec.skip("all bounds are zero");
    for (int u = 1; u <= 8; ++u) {
        const double theta = (1.0 - lambda) * u / (32.0 * norm);
        rec.le(exact_mgf(chain, funcs, theta), bound_mgf(u, lambda), 0.0);
    }
    return rec.done();
}

// ---- appendix ----

void check_appendix(const MarkovChain& chain, Rng& rng, const Tolerances& tol, std::vector<VerifyCheck>& out) {
    Recorder holder("appendix", "holder_application");
    Recorder split("appendix", "averaging_split");
    Recorder diagonal("appendix", "diagonal_chain");
    const Vector& pi = chain.stationary();
    const std::size_t n = pi.size();
    for (std::size_t c = 0; c < kRandomCases; ++c) {
        const std::size_t k = 1 + rng.index(4);

        std::vector<Vector> u(k + 1);
        for (auto& ui : u) ui = instances::random_mean_zero(pi, rng);
        std::vector<Matrix> t(k);
        for (auto& ti : t) ti = instances::random_matrix(n, n, rng);
        const InequalityCheck h = verify_holder_application(pi, u, t, tol);
        holder.le(h.lhs, h.rhs, 1e-9);

        std::vector<Matrix> r(k);
        for (auto& ri : r) ri = instances::random_matrix(n, n, rng);
        const FactorizationCheck f = verify_averaging_split(pi, r);
        split.close(f.lhs, f.product, 1e-9 * std::max(1.0, std::abs(f.product)));
        split.le(std::abs(f.lhs), f.rhs, 1e-9);

        std::vector<Vector> v(k);
        for (auto& vi : v) vi = instances::random_mean_zero(pi, rng);
        std::vector<Matrix> s(k - 1);
        for (auto& si : s) si = instances::random_matrix(n, n, rng);
        const InequalityCheck d = verify_diagonal_chain(pi, v, s, tol);
        diagonal.le(d.lhs, d.rhs, 1e-9);
    }
    out.push_back(holder.done());
    out.push_back(split.done());
    out.push_back(diagonal.done());
}

}  // namespace

VerifySuite parse_verify_suite(std::string_view name) {
    if (name == "all") return VerifySuite::All;
    if (name == "chain") return VerifySuite::Chain;
    if (name == "spectral") return VerifySuite::Spectral;
    if (name == "oracle") return VerifySuite::Oracle;
    if (name == "appendix") return VerifySuite::Appendix;
    fail(ErrorCode::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

std::string_view verify_suite_name(VerifySuite suite) noexcept {
    switch (suite) {
        case VerifySuite::All: return "all";
        case VerifySuite::Chain: return "chain";
        case VerifySuite::Spectral: return "spectral";
        case VerifySuite::Oracle: return "oracle";
        case VerifySuite::Appendix: return "appendix";
    }
    return "unknown";
}

bool VerifyReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed(); });
}

std::size_t VerifyReport::violations() const noexcept {
    std::size_t total = 0;
    for (const auto& c : checks) total += c.violations;
    return total;
}

VerifyReport run_verification(const MarkovChain& chain, const FunctionFamily* funcs, VerifySuite suite,
                              std::uint64_t seed, const Tolerances& tol) {
    VerifyReport report;
    auto& out = report.checks;
    const double lambda = contraction(chain, tol).lambda;

    if (wants(suite, VerifySuite::Chain)) {
        out.push_back(check_power_stochastic(chain));
        out.push_back(check_averaging_identities(chain));
    }
    if (wants(suite, VerifySuite::Spectral)) {
        Rng rng(derive_seed(seed, 1));
        out.push_back(check_power_identity(chain));
        out.push_back(check_power_decay(chain, lambda, tol));
        out.push_back(check_interpolation(chain, rng, tol));
        out.push_back(check_relabel(chain, lambda, rng, tol));
    }
    if (wants(suite, VerifySuite::Oracle)) {
        if (funcs == nullptr) {
            Recorder rec("oracle", "oracle");
            out.push_back(rec.skip("no function family supplied"));
        } else {
            if (funcs->states() != chain.size()) {
                fail(ErrorCode::DimensionMismatch, "function family does not match the chain");
            }
            Rng rng(derive_seed(seed, 2));
            try {
                check_brute_force(chain, *funcs, tol, out);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotLattice) throw;
                Recorder rec("oracle", "enumeration_agreement");
                out.push_back(rec.skip(e.what()));
            }
            out.push_back(check_monomials(chain, *funcs, lambda, rng));
            out.push_back(check_moment_bound(chain, *funcs, lambda));
            check_tail_bounds(chain, *funcs, lambda, tol, out);
            out.push_back(check_mgf_step(chain, *funcs, lambda));
        }
    }
    if (wants(suite, VerifySuite::Appendix)) {
        Rng rng(derive_seed(seed, 3));
        check_appendix(chain, rng, tol, out);
    }
    return report;
}

}  // namespace mch
