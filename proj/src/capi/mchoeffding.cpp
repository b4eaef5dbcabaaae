// SPDX-License-Identifier: Apache-2.0
#include "mchoeffding/mchoeffding.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/chain.hpp"
#include "core/chain_json.hpp"
#include "core/error.hpp"
#include "core/exact_oracle.hpp"
#include "core/lattice.hpp"
#include "core/matrix_lab.hpp"
#include "core/montecarlo.hpp"
#include "core/spectral.hpp"
#include "core/verify.hpp"

struct mch_chain {
    mch::MarkovChain chain;
};

struct mch_functions {
    mch::FunctionFamily funcs;
};

struct mch_distribution {
    mch::LatticeDistribution dist;
};

struct mch_verify_report {
    mch::VerifyReport report;
};

namespace {

thread_local std::string last_error;

mch_status to_status(mch::ErrorCode code) {
    return static_cast<mch_status>(static_cast<int>(code) + 1);
}

mch_status record(mch_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename F>
mch_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return MCH_OK;
    } catch (const mch::Error& e) {
        return record(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(MCH_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(MCH_ERR_INTERNAL, e.what());
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) mch::fail(mch::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

mch::Matrix copy_matrix(const double* data, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) mch::fail(mch::ErrorCode::EmptyInput, "matrix is empty");
    require(data, "matrix");
    mch::Matrix m(rows, cols);
    std::copy(data, data + rows * cols, m.data().begin());
    return m;
}

mch::Vector copy_vector(const double* data, std::size_t n) {
    if (n == 0) return {};
    require(data, "vector");
    return mch::Vector(data, data + n);
}

void write_matrix(const mch::Matrix& m, double* out) { std::copy(m.data().begin(), m.data().end(), out); }

mch::SimConfig sim_config(const mch_sim_config* cfg) {
    require(cfg, "config");
    mch::SimConfig c;
    c.trials = cfg->trials;
    c.master_seed = cfg->seed;
    c.parallelism = cfg->parallelism;
    return c;
}

mch::BoundConstants constants_of(const mch_bound_constants* c) {
    if (c == nullptr) return {};
    return {c->matrix_c, c->glss_c, c->vector_c, c->vector_l};
}

mch_interval interval_of(const mch::Interval& i) { return {i.low, i.high}; }

mch_mean_estimate estimate_of(const mch::MeanEstimate& m) {
    return {m.mean, m.std_error, interval_of(m.ci), m.trials};
}

mch::NormKind norm_kind(mch_norm_kind kind) {
    switch (kind) {
        case MCH_NORM_EUCLIDEAN: return mch::NormKind::Euclidean;
        case MCH_NORM_SUP: return mch::NormKind::Sup;
        case MCH_NORM_SCHATTEN_INF: return mch::NormKind::SchattenInf;
    }
    mch::fail(mch::ErrorCode::InvalidArgument, "unknown norm kind");
}

mch::FillOrder fill_order(mch_fill_order order, std::size_t d) {
    switch (order) {
        case MCH_ORDER_ROW_MAJOR: return mch::FillOrder::row_major(d);
        case MCH_ORDER_DIAGONAL_FIRST: return mch::FillOrder::diagonal_first(d);
    }
    mch::fail(mch::ErrorCode::InvalidOrder, "unknown fill order");
}

std::vector<mch::Vector> split_vectors(const double* x, std::size_t n, std::size_t dim) {
    if (n == 0 || dim == 0) mch::fail(mch::ErrorCode::EmptyInput, "no vectors");
    require(x, "vectors");
    std::vector<mch::Vector> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i].assign(x + i * dim, x + (i + 1) * dim);
    return out;
}

mch::ChainDocument parse_document(const std::string& text) { return mch::parse_chain_json(text); }

void emit_document(mch::ChainDocument doc, mch_chain** chain_out, mch_functions** funcs_out) {
    auto chain = std::make_unique<mch_chain>(mch_chain{std::move(doc.chain)});
    std::unique_ptr<mch_functions> funcs;
    if (doc.functions) funcs = std::make_unique<mch_functions>(mch_functions{std::move(*doc.functions)});
    *chain_out = chain.release();
    if (funcs_out != nullptr) *funcs_out = funcs.release();
}

}  // namespace

extern "C" {

const char* mch_version(void) { return MCH_VERSION_STRING; }

const char* mch_status_name(mch_status status) {
    switch (status) {
        case MCH_OK: return "ok";
        case MCH_ERR_IO: return "io";
        case MCH_ERR_INTERNAL: return "internal";
        default: break;
    }
    const int code = static_cast<int>(status) - 1;
    if (code < 0 || code > static_cast<int>(mch::ErrorCode::Parse)) return "unknown";
    return mch::error_code_name(static_cast<mch::ErrorCode>(code)).data();
}

int mch_status_is_numeric(mch_status status) {
    return status == MCH_ERR_OVERFLOW || status == MCH_ERR_NON_CONVERGENCE;
}

const char* mch_last_error(void) { return last_error.c_str(); }

// ---- chains and functions ----

mch_status mch_chain_create(const double* transition, size_t n, const double* pi, mch_chain** out) {
    return guarded([&] {
        require(out, "out");
        std::optional<mch::Vector> stationary;
        if (pi != nullptr) stationary = copy_vector(pi, n);
        *out = new mch_chain{mch::validate_chain(copy_matrix(transition, n, n), std::move(stationary))};
    });
}

mch_status mch_chain_two_state(double lambda, mch_chain** out) {
    return guarded([&] {
        require(out, "out");
        *out = new mch_chain{mch::two_state_chain(lambda)};
    });
}

void mch_chain_free(mch_chain* chain) { delete chain; }

size_t mch_chain_size(const mch_chain* chain) { return chain->chain.size(); }

void mch_chain_transition(const mch_chain* chain, double* out) { write_matrix(chain->chain.transition(), out); }

void mch_chain_stationary(const mch_chain* chain, double* out) {
    const auto& pi = chain->chain.stationary();
    std::copy(pi.begin(), pi.end(), out);
}

mch_status mch_functions_create(const double* values, size_t steps, size_t states, const double* bounds,
                                mch_functions** out) {
    return guarded([&] {
        require(out, "out");
        mch::Vector a;
        if (bounds != nullptr) a = copy_vector(bounds, steps);
        *out = new mch_functions{mch::FunctionFamily(copy_matrix(values, steps, states), std::move(a))};
    });
}

mch_status mch_functions_two_state(size_t steps, mch_functions** out) {
    return guarded([&] {
        require(out, "out");
        *out = new mch_functions{mch::two_state_functions(steps)};
    });
}

void mch_functions_free(mch_functions* funcs) { delete funcs; }

size_t mch_functions_steps(const mch_functions* funcs) { return funcs->funcs.steps(); }

size_t mch_functions_states(const mch_functions* funcs) { return funcs->funcs.states(); }

void mch_functions_values(const mch_functions* funcs, double* out) { write_matrix(funcs->funcs.values(), out); }

void mch_functions_bounds(const mch_functions* funcs, double* out) {
    const auto& a = funcs->funcs.bounds();
    std::copy(a.begin(), a.end(), out);
}

double mch_functions_bound_norm(const mch_functions* funcs) { return funcs->funcs.bound_norm(); }

mch_status mch_functions_check_mean_zero(const mch_functions* funcs, const mch_chain* chain) {
    return guarded([&] {
        require(funcs, "funcs");
        require(chain, "chain");
        mch::require_mean_zero(funcs->funcs, chain->chain);
    });
}

mch_status mch_chain_parse_json(const char* text, mch_chain** chain_out, mch_functions** funcs_out) {
    return guarded([&] {
        require(text, "text");
        require(chain_out, "chain_out");
        emit_document(parse_document(text), chain_out, funcs_out);
    });
}

mch_status mch_chain_load_json(const char* path, mch_chain** chain_out, mch_functions** funcs_out) {
    if (path == nullptr) return record(MCH_ERR_INVALID_ARGUMENT, "path is null");
    std::ifstream in(path, std::ios::binary);
    if (!in) return record(MCH_ERR_IO, std::string("cannot open ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) return record(MCH_ERR_IO, std::string("cannot read ") + path);
    return guarded([&] {
        require(chain_out, "chain_out");
        emit_document(parse_document(text.str()), chain_out, funcs_out);
    });
}

// ---- spectral ----

mch_status mch_lambda(const mch_chain* chain, double* out) {
    return guarded([&] {
        require(chain, "chain");
        require(out, "out");
        *out = mch::contraction(chain->chain).lambda;
    });
}

mch_status mch_opnorm(const double* t, size_t n, const double* pi, mch_norm_index p, double* out) {
    return guarded([&] {
        require(out, "out");
        mch::NormIndex index;
        switch (p) {
            case MCH_NORM_ONE: index = mch::NormIndex::One; break;
            case MCH_NORM_TWO: index = mch::NormIndex::Two; break;
            case MCH_NORM_INF: index = mch::NormIndex::Infinity; break;
            default: mch::fail(mch::ErrorCode::InvalidArgument, "norm index must be 1, 2 or infinity");
        }
        const mch::NormContext ctx(copy_vector(pi, n));
        *out = mch::opnorm(copy_matrix(t, n, n), ctx, index);
    });
}

mch_status mch_power_deviation(const mch_chain* chain, size_t k, double* out) {
    return guarded([&] {
        require(chain, "chain");
        require(out, "out");
        write_matrix(mch::power_deviation(chain->chain, k), out);
    });
}

// ---- bounds ----

mch_bound_constants mch_bound_constants_default(void) {
    const mch::BoundConstants c{};
    return {c.matrix_c, c.glss_c, c.vector_c, c.vector_l};
}

const char* mch_bound_kind_name(mch_bound_kind kind) {
    switch (kind) {
        case MCH_BOUND_IID: return "iid";
        case MCH_BOUND_HEALY: return "healy";
        case MCH_BOUND_RAO: return "rao";
        case MCH_BOUND_FJS: return "fjs";
        case MCH_BOUND_GLSS: return "glss";
        case MCH_BOUND_MGF: return "mgf";
    }
    return "unknown";
}

mch_status mch_bound_tail(mch_bound_kind kind, double u, double lambda, double dimension,
                          const mch_bound_constants* constants, double* out, int* vacuous) {
    return guarded([&] {
        require(out, "out");
        double value = 0.0;
        if (kind == MCH_BOUND_MGF) {
            value = mch::bound_mgf(u, lambda);
        } else {
            mch::BoundSpec spec;
            spec.constants = constants_of(constants);
            switch (kind) {
                case MCH_BOUND_IID: spec.kind = mch::BoundKind::IidHoeffding; break;
                case MCH_BOUND_HEALY: spec.kind = mch::BoundKind::Healy; break;
                case MCH_BOUND_RAO: spec.kind = mch::BoundKind::Rao; break;
                case MCH_BOUND_FJS: spec.kind = mch::BoundKind::Fjs; break;
                case MCH_BOUND_GLSS: spec.kind = mch::BoundKind::Glss; break;
                default: mch::fail(mch::ErrorCode::InvalidArgument, "unknown bound kind");
            }
            value = mch::evaluate_tail_bound(spec, u, lambda, dimension);
        }
        *out = value;
        if (vacuous != nullptr) *vacuous = mch::assess(value).vacuous ? 1 : 0;
    });
}

mch_status mch_bound_monomial(const size_t* w, size_t q, double lambda, const double* a, size_t n, double* out) {
    return guarded([&] {
        require(out, "out");
        if (q > 0) require(w, "w");
        const mch::Vector bounds = copy_vector(a, n);
        *out = mch::bound_monomial(std::span<const std::size_t>(w, q), lambda, bounds);
    });
}

mch_status mch_bound_moment(int q, double lambda, const double* a, size_t n, double* out) {
    return guarded([&] {
        require(out, "out");
        const mch::Vector bounds = copy_vector(a, n);
        *out = mch::bound_moment(q, lambda, bounds);
    });
}

mch_status mch_bound_matrix_schatten(double sigma, double sigma_star, double dimension, double lambda,
                                     double b_norm, double c, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = mch::bound_matrix_schatten(sigma, sigma_star, dimension, lambda, b_norm, c);
    });
}

mch_status mch_admissible_count(int q, size_t* out) {
    return guarded([&] {
        require(out, "out");
        *out = mch::enumerate_admissible_strings(q).size();
    });
}

// ---- exact oracle ----

#define MCH_REQUIRE_MODEL()        \
    require(chain, "chain");       \
    require(funcs, "funcs");       \
    require(out, "out")

mch_status mch_exact_moments(const mch_chain* chain, const mch_functions* funcs, int q, double* out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        const mch::MomentTable table = mch::exact_moments(chain->chain, funcs->funcs, q);
        std::copy(table.moments.begin(), table.moments.end(), out);
    });
}

mch_status mch_exact_mgf(const mch_chain* chain, const mch_functions* funcs, double theta, double* out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        *out = mch::exact_mgf(chain->chain, funcs->funcs, theta);
    });
}

mch_status mch_exact_tail(const mch_chain* chain, const mch_functions* funcs, double threshold, double* out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        *out = mch::exact_tail(chain->chain, funcs->funcs, threshold);
    });
}

mch_status mch_exact_monomial(const mch_chain* chain, const mch_functions* funcs, const size_t* w, size_t q,
                              double* out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        if (q > 0) require(w, "w");
        *out = mch::exact_monomial_expectation(chain->chain, funcs->funcs, std::span<const std::size_t>(w, q));
    });
}

mch_status mch_exact_distribution(const mch_chain* chain, const mch_functions* funcs, mch_distribution** out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        *out = new mch_distribution{mch::exact_distribution(chain->chain, funcs->funcs)};
    });
}

mch_status mch_brute_force_distribution(const mch_chain* chain, const mch_functions* funcs,
                                        mch_distribution** out) {
    return guarded([&] {
        MCH_REQUIRE_MODEL();
        *out = new mch_distribution{mch::brute_force_distribution(chain->chain, funcs->funcs)};
    });
}

#undef MCH_REQUIRE_MODEL

void mch_distribution_free(mch_distribution* dist) { delete dist; }

size_t mch_distribution_size(const mch_distribution* dist) { return dist->dist.support_size(); }

void mch_distribution_values(const mch_distribution* dist, double* values, double* probabilities) {
    const auto& probs = dist->dist.probabilities();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (values != nullptr) values[k] = dist->dist.value(k);
        if (probabilities != nullptr) probabilities[k] = probs[k];
    }
}

double mch_distribution_tail(const mch_distribution* dist, double threshold) { return dist->dist.tail(threshold); }

// ---- Monte Carlo ----

mch_sim_config mch_sim_config_default(void) {
    const mch::SimConfig c{};
    return {c.trials, c.master_seed, c.parallelism};
}

mch_status mch_wilson_interval(size_t successes, size_t trials, mch_interval* out) {
    return guarded([&] {
        require(out, "out");
        *out = interval_of(mch::wilson_interval(successes, trials));
    });
}

mch_status mch_sample_path(const mch_chain* chain, size_t n, uint64_t seed, size_t* out) {
    return guarded([&] {
        require(chain, "chain");
        require(out, "out");
        const auto path = mch::sample_path(chain->chain, n, seed);
        std::copy(path.begin(), path.end(), out);
    });
}

mch_status mch_estimate_tail(const mch_chain* chain, const mch_functions* funcs, const double* u_grid,
                             size_t count, const mch_sim_config* cfg, double* lambda, mch_tail_row* rows) {
    return guarded([&] {
        require(chain, "chain");
        require(funcs, "funcs");
        require(rows, "rows");
        const mch::Vector grid = copy_vector(u_grid, count);
        const mch::TailReport report = mch::estimate_tail(chain->chain, funcs->funcs, grid, sim_config(cfg));
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            mch_tail_row& o = rows[i];
            o.u = r.u;
            o.threshold = r.threshold;
            o.hits = r.hits;
            o.estimate = r.estimate;
            o.ci = interval_of(r.ci);
            for (std::size_t c = 0; c < mch::kTailColumns; ++c) {
                o.bounds[c] = r.bounds[c].value;
                o.vacuous[c] = r.bounds[c].vacuous ? 1 : 0;
            }
        }
        if (lambda != nullptr) *lambda = report.lambda;
    });
}

mch_status mch_gaussian_norm(const double* x, size_t n, size_t dim, mch_norm_kind kind, const mch_sim_config* cfg,
                             mch_mean_estimate* out) {
    return guarded([&] {
        require(out, "out");
        *out = estimate_of(mch::estimate_gaussian_norm(split_vectors(x, n, dim), norm_kind(kind), sim_config(cfg)));
    });
}

mch_status mch_vector_tail(const mch_chain* chain, const mch_functions* funcs, const double* x, size_t dim,
                           mch_norm_kind kind, const double* thresholds, size_t count, const mch_sim_config* cfg,
                           const mch_bound_constants* constants, mch_vector_tail_summary* summary,
                           mch_vector_tail_row* rows) {
    return guarded([&] {
        require(chain, "chain");
        require(funcs, "funcs");
        require(summary, "summary");
        require(rows, "rows");
        const mch::Vector t = copy_vector(thresholds, count);
        const auto report =
            mch::estimate_vector_sum_tail(chain->chain, funcs->funcs, split_vectors(x, funcs->funcs.steps(), dim),
                                          norm_kind(kind), t, sim_config(cfg), constants_of(constants));
        summary->gaussian = estimate_of(report.gaussian);
        summary->lambda = report.lambda;
        summary->fitted_l = report.fitted_l;
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            rows[i] = {r.threshold, r.u, r.hits, r.estimate, interval_of(r.ci), r.curve};
        }
    });
}

// ---- matrix experiments ----

mch_status mch_coefficients(mch_pattern pattern, size_t d, uint64_t seed, double* out) {
    return guarded([&] {
        require(out, "out");
        switch (pattern) {
            case MCH_PATTERN_ALL_ONES: write_matrix(mch::CoefficientMatrix::all_ones(d).entries(), out); return;
            case MCH_PATTERN_RANDOM_UNIFORM:
                write_matrix(mch::CoefficientMatrix::random_uniform(d, seed).entries(), out);
                return;
        }
        mch::fail(mch::ErrorCode::InvalidArgument, "unknown pattern");
    });
}

mch_status mch_sigma_params(const double* b, size_t d, double* sigma, double* sigma_star) {
    return guarded([&] {
        const auto params = mch::sigma_params(mch::CoefficientMatrix(copy_matrix(b, d, d)));
        if (sigma != nullptr) *sigma = params.sigma;
        if (sigma_star != nullptr) *sigma_star = params.sigma_star;
    });
}

mch_status mch_schatten_norm(const double* m, size_t rows, size_t cols, double p, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = mch::schatten_norm(copy_matrix(m, rows, cols), p);
    });
}

mch_status mch_markov_matrix(const double* b, size_t d, mch_fill_order order, const mch_chain* chain,
                             const double* f, uint64_t seed, double* out) {
    return guarded([&] {
        require(chain, "chain");
        require(out, "out");
        const mch::CoefficientMatrix coefficients(copy_matrix(b, d, d));
        const mch::Vector values = copy_vector(f, chain->chain.size());
        write_matrix(mch::build_markov_matrix(coefficients, fill_order(order, d), chain->chain, values, seed), out);
    });
}

mch_matrix_config mch_matrix_config_default(void) {
    const mch::MatrixExperimentConfig c{};
    return {c.trials, c.seed, c.parallelism, nullptr, 0, c.gaussian_baseline ? 1 : 0};
}

mch_status mch_matrix_experiment(const double* b, size_t d, mch_fill_order order, const mch_chain* chain,
                                 const double* f, const mch_matrix_config* cfg, mch_matrix_report* report,
                                 double* bounds) {
    return guarded([&] {
        require(chain, "chain");
        require(cfg, "config");
        require(report, "report");
        if (cfg->c_count > 0) require(bounds, "bounds");
        const mch::CoefficientMatrix coefficients(copy_matrix(b, d, d));
        const mch::Vector values = copy_vector(f, chain->chain.size());
        mch::MatrixExperimentConfig c;
        c.trials = cfg->trials;
        c.seed = cfg->seed;
        c.parallelism = cfg->parallelism;
        c.c_grid = copy_vector(cfg->c_grid, cfg->c_count);
        c.gaussian_baseline = cfg->gaussian_baseline != 0;
        const auto r = mch::run_matrix_experiment(coefficients, fill_order(order, d), chain->chain, values, c);

        report->dimension = r.dimension;
        report->lambda = r.lambda;
        report->lambda_vacuous = r.lambda_vacuous ? 1 : 0;
        report->sigma = r.sigma.sigma;
        report->sigma_star = r.sigma.sigma_star;
        report->b_norm = r.b_norm;
        report->shape = r.shape;
        report->markov = estimate_of(r.markov);
        report->max_norm = r.max_norm;
        report->dominance_violations = r.dominance_violations;
        report->gaussian = estimate_of(r.gaussian);
        report->gaussian_ratio = r.gaussian_ratio;
        report->fitted_c = r.fitted_c;
        for (std::size_t i = 0; i < cfg->c_count; ++i) {
            bounds[i] = i < r.bounds.size() ? r.bounds[i].bound : std::numeric_limits<double>::quiet_NaN();
        }
    });
}

// ---- verification ----

mch_status mch_verify(const mch_chain* chain, const mch_functions* funcs, const char* suite, uint64_t seed,
                      mch_verify_report** out) {
    return guarded([&] {
        require(chain, "chain");
        require(suite, "suite");
        require(out, "out");
        const mch::FunctionFamily* f = funcs != nullptr ? &funcs->funcs : nullptr;
        *out = new mch_verify_report{mch::run_verification(chain->chain, f, mch::parse_verify_suite(suite), seed)};
    });
}

void mch_verify_report_free(mch_verify_report* report) { delete report; }

size_t mch_verify_report_size(const mch_verify_report* report) { return report->report.checks.size(); }

mch_status mch_verify_report_entry(const mch_verify_report* report, size_t i, mch_verify_entry* out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        if (i >= report->report.checks.size()) mch::fail(mch::ErrorCode::OutOfRange, "entry index out of range");
        const auto& c = report->report.checks[i];
        *out = {c.suite.c_str(), c.name.c_str(), c.cases, c.violations, c.margin, c.skipped ? 1 : 0, c.note.c_str()};
    });
}

int mch_verify_report_passed(const mch_verify_report* report) { return report->report.passed() ? 1 : 0; }

}  // extern "C"
