// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/chain.hpp"
#include "core/exact_oracle.hpp"
#include "core/instances.hpp"
#include "core/lattice.hpp"
#include "core/matrix_lab.hpp"
#include "core/montecarlo.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

namespace {

using mch::Matrix;
using mch::Vector;
using mch::instances::LatticeInstance;

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

// ---- shared instances ----

std::vector<LatticeInstance> oracle_instances() {
    mch::Rng rng(0xACCE97);
    std::vector<LatticeInstance> out;
    for (int i = 0; i < 50; ++i) out.push_back(mch::instances::random_lattice_instance(4, 7, rng));
    return out;
}

struct Dominance {
    LatticeInstance inst;
    double lambda;
};

std::vector<Dominance> dominance_instances() {
    mch::Rng rng(0xD0417);
    std::vector<Dominance> out;
    while (out.size() < 20) {
        auto inst = mch::instances::random_lattice_instance(4, 7, rng);
        const double lambda = mch::contraction(inst.chain).lambda;
        if (lambda < 0.95) out.push_back({std::move(inst), lambda});
    }
    return out;
}

// ---- criteria ----

Outcome oracle_equivalence() {
    std::size_t comparisons = 0, mismatches = 0;
    double worst = 0.0;
    // Absolute 1e-10, scaled up for references above 1 (high moments reach 1e5).
    auto compare = [&](double a, double b) {
        ++comparisons;
        const double diff = std::abs(a - b) / std::max(1.0, std::abs(b));
        worst = std::max(worst, diff);
        if (!(diff <= 1e-10)) ++mismatches;
    };
    for (const auto& inst : oracle_instances()) {
        const auto brute = mch::brute_force_distribution(inst.chain, inst.funcs);
        std::vector<double> thresholds{0.0};
        for (std::size_t k = 0; k < brute.support_size(); ++k) {
            const double s = std::abs(brute.value(k));
            thresholds.push_back(s);
            thresholds.push_back(s + 0.5 * brute.step());
        }
        for (const double t : thresholds) compare(mch::exact_tail(inst.chain, inst.funcs, t), brute.tail(t));
        const auto table = mch::exact_moments(inst.chain, inst.funcs, 6);
        for (int m = 0; m <= 6; ++m) compare(table.moments[m], brute.moment(m));
        const double scale = 1.0 / inst.funcs.bound_norm();
        for (const double theta : {-1.0, -0.5, -0.1, 0.1, 0.5, 1.0}) {
            compare(mch::exact_mgf(inst.chain, inst.funcs, theta * scale), brute.mgf(theta * scale));
        }
    }
    return {mismatches == 0, std::to_string(comparisons) + " comparisons on 50 chains, max |diff| " +
                                 fmt("%.2e", worst) + " (scaled), " + std::to_string(mismatches) + " above 1e-10"};
}

Outcome tail_dominance() {
    std::size_t checks = 0, rao_violations = 0, fjs_violations = 0;
    double fjs_worst_ratio = 0.0;
    for (const auto& [inst, lambda] : dominance_instances()) {
        const auto dist = mch::exact_distribution(inst.chain, inst.funcs);
        const double norm = inst.funcs.bound_norm();
        for (int i = 1; i <= 16; ++i) {
            const double u = 0.5 * i;
            const double tail = dist.tail(u * norm);
            ++checks;
            if (tail > mch::bound_rao(u, lambda)) ++rao_violations;
            const double fjs = mch::bound_fjs(u, lambda);
            if (tail > fjs) ++fjs_violations;
            fjs_worst_ratio = std::max(fjs_worst_ratio, tail / fjs);
        }
    }
    return {rao_violations == 0 && fjs_violations == 0,
            std::to_string(checks) + " (chain, u) pairs; rao violations " + std::to_string(rao_violations) +
                ", fjs violations " + std::to_string(fjs_violations) + ", max tail/fjs " +
                fmt("%.3f", fjs_worst_ratio)};
}

Outcome moment_dominance() {
    std::size_t checks = 0, violations = 0;
    double worst_ratio = 0.0;
    for (const auto& [inst, lambda] : dominance_instances()) {
        const auto table = mch::exact_moments(inst.chain, inst.funcs, 12);
        for (int q = 2; q <= 12; q += 2) {
            const double bound = mch::bound_moment(q, lambda, inst.funcs.bounds());
            ++checks;
            if (table.moments[q] > bound) ++violations;
            worst_ratio = std::max(worst_ratio, table.moments[q] / bound);
        }
    }
    return {violations == 0, std::to_string(checks) + " (chain, q) pairs, " + std::to_string(violations) +
                                 " violations, max moment/bound " + fmt("%.2e", worst_ratio)};
}

Outcome monomial_dominance() {
    const auto chains = dominance_instances();
    mch::Rng rng(0x3101);
    std::size_t violations = 0, absolute_held = 0;
    double worst = -INFINITY;
    for (int i = 0; i < 500; ++i) {
        const auto& [inst, lambda] = chains[static_cast<std::size_t>(i) % chains.size()];
        const std::size_t q = 2 + rng.index(5);
        const auto w = mch::instances::random_sorted_indices(q, inst.funcs.steps(), rng);
        const double exact = mch::exact_monomial_expectation(inst.chain, inst.funcs, w);
        const double bound = mch::bound_monomial(w, lambda, inst.funcs.bounds());
        worst = std::max(worst, exact - bound);
        if (exact > bound + 1e-9) ++violations;
        if (std::abs(exact) <= bound + 1e-9) ++absolute_held;
    }
    return {violations == 0, "500 index vectors, " + std::to_string(violations) + " violations, max excess " +
                                 fmt("%.2e", worst) + "; |E| within bound in " + std::to_string(absolute_held) +
                                 "/500 (informational)"};
}

Outcome mgf_step() {
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    const auto f = mch::two_state_functions(64);
    const double norm = f.bound_norm();
    for (const double lambda : {0.0, 0.5, 0.9}) {
        const auto chain = mch::two_state_chain(lambda);
        for (int u = 1; u <= 8; ++u) {
            const double theta = (1.0 - lambda) * u / (32.0 * norm);
            const double mgf = mch::exact_mgf(chain, f, theta);
            const double bound = mch::bound_mgf(u, lambda);
            if (mgf > bound) ++violations;
            worst_ratio = std::max(worst_ratio, mgf / bound);
        }
    }
    return {violations == 0, "24 (lambda, u) pairs, " + std::to_string(violations) + " violations, max mgf/bound " +
                                 fmt("%.4f", worst_ratio)};
}

Outcome interpolation() {
    mch::Rng rng(0xC1A1);
    std::size_t violations = 0;
    double worst = -INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng.index(6);
        const mch::NormContext ctx(mch::instances::random_distribution(n, rng));
        const Matrix t = mch::instances::random_matrix(n, n, rng, 0.5 + 4.5 * rng.uniform());
        const double two = mch::opnorm(t, ctx, mch::NormIndex::Two);
        const double rhs = mch::opnorm(t, ctx, mch::NormIndex::One) * mch::opnorm(t, ctx, mch::NormIndex::Infinity);
        worst = std::max(worst, two * two - rhs);
        if (two * two > rhs + 1e-9) ++violations;
    }
    return {violations == 0,
            "1000 (T, pi) pairs, " + std::to_string(violations) + " violations, max excess " + fmt("%.2e", worst)};
}

Outcome spectral_identities() {
    std::size_t violations = 0;
    double worst_identity = 0.0, worst_decay = -INFINITY, worst_two_state = 0.0;
    for (const auto& [inst, lambda] : dominance_instances()) {
        const Matrix dev = inst.chain.transition() - mch::averaging_operator(inst.chain).matrix();
        const mch::NormContext ctx(inst.chain.stationary());
        Matrix power = dev;
        for (std::size_t k = 1; k <= 20; ++k) {
            if (k > 1) power = power * dev;
            const Matrix pd = mch::power_deviation(inst.chain, k);
            const double diff = mch::max_abs_difference(pd, power);
            worst_identity = std::max(worst_identity, diff);
            if (diff > 1e-10) ++violations;
            const double excess = mch::opnorm(pd, ctx, mch::NormIndex::Two) - std::pow(lambda, k);
            worst_decay = std::max(worst_decay, excess);
            if (excess > 1e-9) ++violations;
        }
    }
    for (int i = 0; i <= 9; ++i) {
        const double lambda = 0.1 * i;
        const double diff = std::abs(mch::contraction(mch::two_state_chain(lambda)).lambda - lambda);
        worst_two_state = std::max(worst_two_state, diff);
        if (diff > 1e-10) ++violations;
    }
    return {violations == 0, "identity max diff " + fmt("%.2e", worst_identity) + ", decay max excess " +
                                 fmt("%.2e", worst_decay) + ", two-state lambda max diff " +
                                 fmt("%.2e", worst_two_state)};
}

Outcome appendix() {
    mch::Rng rng(0xA99E);
    std::size_t holder = 0, split = 0, diagonal = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng.index(5);
        const std::size_t k = 1 + rng.index(4);
        const Vector pi = mch::instances::random_distribution(n, rng);

        std::vector<Vector> u(k + 1);
        for (auto& x : u) x = mch::instances::random_mean_zero(pi, rng);
        std::vector<Matrix> t(k);
        for (auto& m : t) m = mch::instances::random_matrix(n, n, rng);
        if (!mch::verify_holder_application(pi, u, t).holds(1e-9)) ++holder;

        std::vector<Matrix> r(k);
        for (auto& m : r) m = mch::instances::random_matrix(n, n, rng);
        const auto s = mch::verify_averaging_split(pi, r);
        if (std::abs(s.lhs - s.product) > 1e-9 * std::max(1.0, std::abs(s.product)) || std::abs(s.lhs) > s.rhs + 1e-9) {
            ++split;
        }

        std::vector<Vector> v(k);
        for (auto& x : v) x = mch::instances::random_mean_zero(pi, rng);
        std::vector<Matrix> d(k - 1);
        for (auto& m : d) m = mch::instances::random_matrix(n, n, rng);
        if (!mch::verify_diagonal_chain(pi, v, d).holds(1e-9)) ++diagonal;
    }
    return {holder + split + diagonal == 0, "1000 instances; violations: holder " + std::to_string(holder) +
                                                ", averaging split " + std::to_string(split) + ", diagonal chain " +
                                                std::to_string(diagonal)};
}

Outcome calibration() {
    const auto instances = oracle_instances();
    int covered = 0;
    for (int m = 0; m < 100; ++m) {
        const auto& inst = instances[static_cast<std::size_t>(m) % instances.size()];
        const auto dist = mch::exact_distribution(inst.chain, inst.funcs);
        const std::vector<double> grid{0.5};
        mch::SimConfig cfg;
        cfg.trials = 10'000;
        cfg.master_seed = mch::derive_seed(0xCA1B, static_cast<std::uint64_t>(m));
        const auto report = mch::estimate_tail(inst.chain, inst.funcs, grid, cfg);
        const auto& row = report.rows[0];
        if (row.ci.contains(dist.tail(row.threshold))) ++covered;
    }
    return {covered >= 90, std::to_string(covered) + "/100 meta-trials cover the exact tail (need >= 90)"};
}

Outcome matrix_norm_shape() {
    const std::size_t d = 32;
    const auto b = mch::CoefficientMatrix::all_ones(d);
    const std::vector<double> f{1.0, -1.0};
    mch::MatrixExperimentConfig cfg;
    cfg.trials = 500;
    cfg.seed = 0x3A7;
    bool dominated = true, norm_exact = true;
    double c_star = 0.0, ratio0 = 0.0, ratio9 = 0.0;
    std::string detail;
    for (const double lambda : {0.0, 0.5, 0.9}) {
        const auto r = mch::run_matrix_experiment(b, mch::FillOrder::row_major(d), mch::two_state_chain(lambda), f, cfg);
        if (std::abs(r.b_norm - static_cast<double>(d)) > 1e-10 * d) norm_exact = false;
        if (r.dominance_violations != 0 || r.max_norm > static_cast<double>(d) * (1 + 1e-12)) dominated = false;
        c_star = std::max(c_star, r.fitted_c);
        if (lambda == 0.0) ratio0 = r.fitted_c;
        if (lambda == 0.9) ratio9 = r.fitted_c;
        detail += "lambda=" + fmt("%.1f", lambda) + ": mean " + fmt("%.3f", r.markov.mean) + ", max " +
                  fmt("%.3f", r.max_norm) + ", ratio " + fmt("%.4f", r.fitted_c) + "; ";
    }
    const bool finite = std::isfinite(c_star) && c_star > 0.0;
    const double growth = ratio9 / ratio0;
    detail += "C* " + fmt("%.4f", c_star) + ", ratio(0.9)/ratio(0) " + fmt("%.4f", growth);
    return {dominated && norm_exact && finite && growth < 3.0, detail};
}

struct Captured {
    int exit_code = -1;
    std::string out;
};

Captured capture(const std::string& cmd) {
    Captured c;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (pipe == nullptr) return c;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
    const int status = pclose(pipe);
    c.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return c;
}

std::string data_section(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("duration_seconds") == std::string::npos) out += line + "\n";
    }
    return out;
}

Outcome determinism() {
    const std::string cli = MCH_CLI_PATH;
    const std::vector<std::string> invocations = {
        "spectral --lambda 0.7 --powers 10",
        "bounds --u-grid 0:8:0.5 --lambda 0.5",
        "exact --lambda 0.6 -n 10 --q 8 --u-grid 0:3:0.25 --format json",
        "simulate --lambda 0.6 -n 24 --trials 20000 --seed 11 --u-grid 0.25:2:0.25",
        "simulate --lambda 0.6 -n 24 --trials 20000 --seed 11 --u-grid 0.25:2:0.25 --format json",
        "matrix --d 12 --lambda 0.5 --trials 100 --seed 5 --c-grid 0.5:2:0.5",
        "matrix --d 8 --pattern random-uniform --order diagonal-first --lambda 0.3 --trials 60 --seed 9",
        "verify --lambda 0.5 -n 8 --suite all --seed 4",
    };
    std::size_t differing = 0, failed = 0;
    for (const auto& args : invocations) {
        const Captured a = capture("MC_HOEFFDING_THREADS=1 " + cli + " " + args);
        const Captured b = capture("MC_HOEFFDING_THREADS=1 " + cli + " " + args);
        const Captured c = capture("MC_HOEFFDING_THREADS=4 " + cli + " " + args);
        if (a.exit_code != 0 || b.exit_code != 0 || c.exit_code != 0 || a.out.empty()) {
            ++failed;
            continue;
        }
        const std::string ref = data_section(a.out);
        if (ref != data_section(b.out) || ref != data_section(c.out)) ++differing;
    }
    return {differing == 0 && failed == 0,
            std::to_string(invocations.size()) + " invocations x 3 runs (threads 1, 1, 4); " +
                std::to_string(differing) + " differ, " + std::to_string(failed) + " failed to run"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence", 30, oracle_equivalence},
        {2, "tail bound dominance (rao, fjs)", 60, tail_dominance},
        {3, "moment bound dominance", 60, moment_dominance},
        {4, "monomial bound dominance", 60, monomial_dominance},
        {5, "mgf step", 60, mgf_step},
        {6, "norm interpolation", 60, interpolation},
        {7, "spectral identities", 60, spectral_identities},
        {8, "appendix inequalities", 60, appendix},
        {9, "Monte Carlo calibration", 300, calibration},
        {10, "matrix spectral norm shape", 600, matrix_norm_shape},
        {11, "CLI determinism", 300, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool passed = outcome.passed && in_time;
        if (!passed) ++failures;
        std::printf("%s  criterion %2d  %-34s %s [%.2fs%s]\n", passed ? "PASS" : "FAIL", c.id, c.title,
                    outcome.detail.c_str(), seconds, in_time ? "" : ", over time limit");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
