// SPDX-License-Identifier: Apache-2.0
#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <mchoeffding/mchoeffding.h>

namespace mchcli {

namespace {

void check(mch_status status) {
    if (status == MCH_OK) return;
    throw CliError(mch_status_is_numeric(status) ? 2 : 1,
                   std::string(mch_status_name(status)) + ": " + mch_last_error());
}

struct ChainDeleter {
    void operator()(mch_chain* c) const { mch_chain_free(c); }
};
struct FunctionsDeleter {
    void operator()(mch_functions* f) const { mch_functions_free(f); }
};
struct DistributionDeleter {
    void operator()(mch_distribution* d) const { mch_distribution_free(d); }
};
struct VerifyDeleter {
    void operator()(mch_verify_report* r) const { mch_verify_report_free(r); }
};

using ChainPtr = std::unique_ptr<mch_chain, ChainDeleter>;
using FunctionsPtr = std::unique_ptr<mch_functions, FunctionsDeleter>;
using DistributionPtr = std::unique_ptr<mch_distribution, DistributionDeleter>;
using VerifyPtr = std::unique_ptr<mch_verify_report, VerifyDeleter>;

struct Model {
    ChainPtr chain;
    FunctionsPtr funcs;
};

ChainPtr two_state(double lambda) {
    mch_chain* c = nullptr;
    check(mch_chain_two_state(lambda, &c));
    return ChainPtr(c);
}

Model load_model(const ModelArgs& args) {
    if (!args.chain_path.empty() && args.lambda) {
        throw CliError(1, "--chain and --lambda are mutually exclusive");
    }
    Model m;
    if (!args.chain_path.empty()) {
        mch_chain* c = nullptr;
        mch_functions* f = nullptr;
        check(mch_chain_load_json(args.chain_path.c_str(), &c, &f));
        m.chain.reset(c);
        m.funcs.reset(f);
        return m;
    }
    if (!args.lambda) throw CliError(1, "need --chain FILE or --lambda L");
    m.chain = two_state(*args.lambda);
    mch_functions* f = nullptr;
    check(mch_functions_two_state(args.steps, &f));
    m.funcs.reset(f);
    return m;
}

mch_functions& require_functions(const Model& m) {
    if (!m.funcs) throw CliError(1, "chain file has no \"functions\" section");
    return *m.funcs;
}

double lambda_of(const mch_chain& chain) {
    double lambda = 0.0;
    check(mch_lambda(&chain, &lambda));
    return lambda;
}

std::vector<double> stationary_of(const mch_chain& chain) {
    std::vector<double> pi(mch_chain_size(&chain));
    mch_chain_stationary(&chain, pi.data());
    return pi;
}

std::vector<double> bounds_of(const mch_functions& funcs) {
    std::vector<double> a(mch_functions_steps(&funcs));
    mch_functions_bounds(&funcs, a.data());
    return a;
}

struct TailBounds {
    double values[4];
    int vacuous[4];
};

constexpr mch_bound_kind kTailKinds[4] = {MCH_BOUND_IID, MCH_BOUND_HEALY, MCH_BOUND_RAO, MCH_BOUND_FJS};
const char* const kTailNames[4] = {"iid", "healy", "rao", "fjs"};

TailBounds tail_bounds(double u, double lambda) {
    TailBounds b{};
    for (int k = 0; k < 4; ++k) {
        check(mch_bound_tail(kTailKinds[k], u, lambda, 1.0, nullptr, &b.values[k], &b.vacuous[k]));
    }
    return b;
}

std::string vacuous_flags(const int* vacuous, std::size_t count = 4) {
    std::string out;
    for (std::size_t k = 0; k < count; ++k) {
        if (!vacuous[k]) continue;
        if (!out.empty()) out += ';';
        out += kTailNames[k];
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(1, "cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

Json interval_json(const mch_interval& ci) { return Json::array({ci.low, ci.high}); }

Json estimate_json(const mch_mean_estimate& m) {
    Json j;
    j["mean"] = m.mean;
    j["std_error"] = m.std_error;
    j["ci95"] = interval_json(m.ci);
    j["trials"] = m.trials;
    return j;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(x)) {
            throw CliError(1, "bad number '" + s + "' in grid '" + text + "'");
        }
        return x;
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string part;
        std::istringstream in(s);
        while (std::getline(in, part, sep)) parts.push_back(part);
        if (!s.empty() && s.back() == sep) parts.emplace_back();
        return parts;
    };

    if (text.empty()) throw CliError(1, "empty grid");
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw CliError(1, "grid '" + text + "' must be start:stop:step");
        const double start = number(parts[0]);
        const double stop = number(parts[1]);
        const double step = number(parts[2]);
        if (!(step > 0.0)) throw CliError(1, "grid step must be positive");
        if (stop < start) throw CliError(1, "grid stop is below start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
        if (count > 1'000'000) throw CliError(1, "grid has too many points");
        for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    for (const auto& part : split(text, ',')) out.push_back(number(part));
    return out;
}

std::string ModelArgs::describe() const {
    if (!chain_path.empty()) return chain_path;
    if (lambda) return "two-state(lambda=" + format_number(*lambda) + ", steps=" + std::to_string(steps) + ")";
    return "";
}

// ---- spectral ----

CommandResult run_spectral(const SpectralArgs& args) {
    const Model m = load_model(args.model);
    const mch_chain& chain = *m.chain;
    const std::size_t n = mch_chain_size(&chain);
    const double lambda = lambda_of(chain);
    const std::vector<double> pi = stationary_of(chain);

    std::vector<double> deviation(n * n);
    Json norms = Json::array();
    CsvTable csv({"k", "deviation_norm", "lambda_power"});
    for (std::size_t k = 1; k <= args.powers; ++k) {
        check(mch_power_deviation(&chain, k, deviation.data()));
        double norm = 0.0;
        check(mch_opnorm(deviation.data(), n, pi.data(), MCH_NORM_TWO, &norm));
        const double power = std::pow(lambda, static_cast<double>(k));
        Json row;
        row["k"] = k;
        row["deviation_norm"] = norm;
        row["lambda_power"] = power;
        norms.push_back(row);
        csv.add(static_cast<std::uint64_t>(k)).add(norm).add(power);
        csv.end_row();
    }

    check(mch_power_deviation(&chain, 1, deviation.data()));
    Json opnorms;
    const std::pair<const char*, mch_norm_index> indices[] = {
        {"one", MCH_NORM_ONE}, {"two", MCH_NORM_TWO}, {"infinity", MCH_NORM_INF}};
    for (const auto& [name, p] : indices) {
        double value = 0.0;
        check(mch_opnorm(deviation.data(), n, pi.data(), p, &value));
        opnorms[name] = value;
    }

    CommandResult r;
    r.data["states"] = n;
    r.data["lambda"] = lambda;
    r.data["vacuous"] = lambda >= 1.0;
    r.data["stationary"] = pi;
    r.data["deviation_opnorms"] = opnorms;
    r.data["powers"] = norms;
    r.csv = "# lambda: " + format_number(lambda) + "\n" + csv.str();
    return r;
}

// ---- bounds ----

CommandResult run_bounds(const BoundsArgs& args) {
    if (args.lambda && !args.chain_path.empty()) {
        throw CliError(1, "--chain and --lambda are mutually exclusive");
    }
    double lambda = 0.0;
    if (args.lambda) {
        lambda = *args.lambda;
    } else if (!args.chain_path.empty()) {
        mch_chain* c = nullptr;
        check(mch_chain_load_json(args.chain_path.c_str(), &c, nullptr));
        lambda = lambda_of(*ChainPtr(c));
    } else {
        throw CliError(1, "need --lambda L or --chain FILE");
    }
    mch_bound_constants constants = mch_bound_constants_default();
    constants.glss_c = args.glss_c;

    CsvTable csv({"u", "iid", "healy", "rao", "fjs", "vacuous_flags"});
    Json rows = Json::array();
    for (const double u : parse_grid(args.u_grid)) {
        const TailBounds b = tail_bounds(u, lambda);
        double glss = 0.0, mgf = 0.0;
        int glss_vacuous = 0;
        check(mch_bound_tail(MCH_BOUND_GLSS, u, lambda, args.dimension, &constants, &glss, &glss_vacuous));
        check(mch_bound_tail(MCH_BOUND_MGF, u, lambda, 1.0, nullptr, &mgf, nullptr));

        csv.add(u);
        for (const double v : b.values) csv.add(v);
        csv.add(vacuous_flags(b.vacuous));
        csv.end_row();

        Json row;
        row["u"] = u;
        for (int k = 0; k < 4; ++k) row[kTailNames[k]] = b.values[k];
        row["glss"] = glss;
        row["mgf"] = mgf;
        Json flags = Json::array();
        for (int k = 0; k < 4; ++k) {
            if (b.vacuous[k]) flags.push_back(kTailNames[k]);
        }
        if (glss_vacuous) flags.push_back("glss");
        row["vacuous"] = flags;
        rows.push_back(row);
    }

    CommandResult r;
    r.data["lambda"] = lambda;
    r.data["glss_dimension"] = args.dimension;
    r.data["glss_c"] = args.glss_c;
    r.data["rows"] = rows;
    r.csv = csv.str();
    return r;
}

// ---- exact ----

CommandResult run_exact(const ExactArgs& args) {
    const Model m = load_model(args.model);
    const mch_chain& chain = *m.chain;
    const mch_functions& funcs = require_functions(m);
    check(mch_functions_check_mean_zero(&funcs, &chain));
    const double lambda = lambda_of(chain);
    const double norm = mch_functions_bound_norm(&funcs);
    const std::vector<double> a = bounds_of(funcs);

    if (args.q < 0) throw CliError(1, "--q must be nonnegative");
    std::vector<double> moments(static_cast<std::size_t>(args.q) + 1);
    check(mch_exact_moments(&chain, &funcs, args.q, moments.data()));

    CommandResult r;
    r.data["lambda"] = lambda;
    r.data["bound_norm"] = norm;
    r.data["q"] = args.q;
    Json table = Json::array();
    CsvTable moment_csv({"m", "moment", "moment_bound"});
    for (int k = 0; k <= args.q; ++k) {
        Json row;
        row["m"] = k;
        row["moment"] = moments[static_cast<std::size_t>(k)];
        double bound = std::nan("");
        if (k >= 2 && k % 2 == 0 && lambda < 1.0) {
            check(mch_bound_moment(k, lambda, a.data(), a.size(), &bound));
        }
        row["moment_bound"] = bound;
        table.push_back(row);
        moment_csv.add(static_cast<std::uint64_t>(k)).add(moments[static_cast<std::size_t>(k)]).add(bound);
        moment_csv.end_row();
    }
    r.data["moments"] = table;
    r.csv = moment_csv.str();

    if (!args.u_grid.empty()) {
        mch_distribution* raw = nullptr;
        check(mch_exact_distribution(&chain, &funcs, &raw));
        const DistributionPtr dist(raw);
        CsvTable tail_csv({"u", "threshold", "tail", "rao", "fjs"});
        Json tails = Json::array();
        for (const double u : parse_grid(args.u_grid)) {
            const double threshold = u * norm;
            const double tail = mch_distribution_tail(dist.get(), threshold);
            double rao = 0.0, fjs = 0.0;
            check(mch_bound_tail(MCH_BOUND_RAO, u, lambda, 1.0, nullptr, &rao, nullptr));
            check(mch_bound_tail(MCH_BOUND_FJS, u, lambda, 1.0, nullptr, &fjs, nullptr));
            Json row;
            row["u"] = u;
            row["threshold"] = threshold;
            row["tail"] = tail;
            row["rao"] = rao;
            row["fjs"] = fjs;
            tails.push_back(row);
            tail_csv.add(u).add(threshold).add(tail).add(rao).add(fjs);
            tail_csv.end_row();
        }
        r.data["tails"] = tails;
        // With a u-grid the CSV carries the tail table.
        r.csv = tail_csv.str();
    }

    if (!args.theta_grid.empty()) {
        Json mgfs = Json::array();
        for (const double theta : parse_grid(args.theta_grid)) {
            double value = 0.0;
            check(mch_exact_mgf(&chain, &funcs, theta, &value));
            Json row;
            row["theta"] = theta;
            row["mgf"] = value;
            mgfs.push_back(row);
        }
        r.data["mgf"] = mgfs;
    }
    return r;
}

// ---- simulate ----

CommandResult run_simulate(const SimulateArgs& args) {
    const Model m = load_model(args.model);
    const mch_chain& chain = *m.chain;
    const mch_functions& funcs = require_functions(m);
    check(mch_functions_check_mean_zero(&funcs, &chain));
    const std::vector<double> grid = parse_grid(args.u_grid);

    mch_sim_config cfg = mch_sim_config_default();
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.parallelism = args.threads;
    std::vector<mch_tail_row> rows(grid.size());
    double lambda = 0.0;
    check(mch_estimate_tail(&chain, &funcs, grid.data(), grid.size(), &cfg, &lambda, rows.data()));

    DistributionPtr dist;
    if (args.exact) {
        mch_distribution* raw = nullptr;
        check(mch_exact_distribution(&chain, &funcs, &raw));
        dist.reset(raw);
    }

    std::vector<std::string> columns = {"u", "threshold", "hits", "estimate", "ci_low", "ci_high",
                                        "iid", "healy", "rao", "fjs", "vacuous_flags"};
    if (dist) columns.push_back("exact");
    CsvTable csv(columns);
    Json out_rows = Json::array();
    for (const auto& row : rows) {
        csv.add(row.u).add(row.threshold).add(static_cast<std::uint64_t>(row.hits)).add(row.estimate);
        csv.add(row.ci.low).add(row.ci.high);
        for (const double b : row.bounds) csv.add(b);
        csv.add(vacuous_flags(row.vacuous));

        Json j;
        j["u"] = row.u;
        j["threshold"] = row.threshold;
        j["hits"] = row.hits;
        j["estimate"] = row.estimate;
        j["ci95"] = interval_json(row.ci);
        for (int k = 0; k < 4; ++k) j[kTailNames[k]] = row.bounds[k];
        Json flags = Json::array();
        for (int k = 0; k < 4; ++k) {
            if (row.vacuous[k]) flags.push_back(kTailNames[k]);
        }
        j["vacuous"] = flags;
        if (dist) {
            const double exact = mch_distribution_tail(dist.get(), row.threshold);
            csv.add(exact);
            j["exact"] = exact;
            j["exact_in_ci"] = row.ci.low <= exact && exact <= row.ci.high;
        }
        csv.end_row();
        out_rows.push_back(j);
    }

    CommandResult r;
    r.data["trials"] = args.trials;
    r.data["lambda"] = lambda;
    r.data["bound_norm"] = mch_functions_bound_norm(&funcs);
    r.data["rows"] = out_rows;
    r.csv = "# lambda: " + format_number(lambda) + "\n" + csv.str();
    return r;
}

// ---- matrix ----

CommandResult run_matrix(const MatrixArgs& args) {
    std::vector<double> b;
    std::size_t d = args.d;
    if (!args.b_path.empty()) {
        Json doc;
        try {
            doc = Json::parse(read_file(args.b_path));
        } catch (const Json::exception& e) {
            throw CliError(1, std::string("coefficient JSON: ") + e.what());
        }
        if (doc.is_object() && doc.contains("b")) doc = doc["b"];
        if (!doc.is_array() || doc.empty()) throw CliError(1, "coefficient JSON must be a non-empty array of rows");
        d = doc.size();
        b.reserve(d * d);
        for (const auto& row : doc) {
            if (!row.is_array() || row.size() != d) throw CliError(1, "coefficient matrix must be square");
            for (const auto& x : row) {
                if (!x.is_number()) throw CliError(1, "coefficient matrix must contain only numbers");
                b.push_back(x.get<double>());
            }
        }
    } else {
        mch_pattern pattern;
        if (args.pattern == "all-ones") {
            pattern = MCH_PATTERN_ALL_ONES;
        } else if (args.pattern == "random-uniform") {
            pattern = MCH_PATTERN_RANDOM_UNIFORM;
        } else {
            throw CliError(1, "unknown pattern '" + args.pattern + "'");
        }
        if (d == 0) throw CliError(1, "--d must be positive");
        b.resize(d * d);
        check(mch_coefficients(pattern, d, args.seed, b.data()));
    }

    mch_fill_order order;
    if (args.order == "row-major") {
        order = MCH_ORDER_ROW_MAJOR;
    } else if (args.order == "diagonal-first") {
        order = MCH_ORDER_DIAGONAL_FIRST;
    } else {
        throw CliError(1, "unknown order '" + args.order + "'");
    }

    const ChainPtr chain = two_state(args.lambda);
    const double f[2] = {1.0, -1.0};
    const std::vector<double> c_grid = parse_grid(args.c_grid);
    mch_matrix_config cfg = mch_matrix_config_default();
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.parallelism = args.threads;
    cfg.c_grid = c_grid.data();
    cfg.c_count = c_grid.size();
    cfg.gaussian_baseline = args.no_gaussian ? 0 : 1;
    mch_matrix_report rep{};
    std::vector<double> bounds(c_grid.size());
    check(mch_matrix_experiment(b.data(), d, order, chain.get(), f, &cfg, &rep, bounds.data()));

    CommandResult r;
    Json& j = r.data;
    j["dimension"] = rep.dimension;
    j["lambda"] = rep.lambda;
    j["sigma"] = rep.sigma;
    j["sigma_star"] = rep.sigma_star;
    j["b_norm"] = rep.b_norm;
    j["shape"] = rep.shape;
    j["markov"] = estimate_json(rep.markov);
    j["max_norm"] = rep.max_norm;
    j["dominance_violations"] = rep.dominance_violations;
    if (!args.no_gaussian) {
        j["gaussian"] = estimate_json(rep.gaussian);
        j["gaussian_ratio"] = rep.gaussian_ratio;
    }
    j["fitted_c"] = rep.fitted_c;
    Json rows = Json::array();
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        Json row;
        row["c"] = c_grid[i];
        row["bound"] = bounds[i];
        rows.push_back(row);
    }
    j["bounds"] = rows;

    CsvTable csv({"metric", "value"});
    auto metric = [&](const std::string& name, double value) {
        csv.add(name).add(value);
        csv.end_row();
    };
    metric("dimension", static_cast<double>(rep.dimension));
    metric("lambda", rep.lambda);
    metric("sigma", rep.sigma);
    metric("sigma_star", rep.sigma_star);
    metric("b_norm", rep.b_norm);
    metric("shape", rep.shape);
    metric("markov_mean", rep.markov.mean);
    metric("markov_std_error", rep.markov.std_error);
    metric("max_norm", rep.max_norm);
    metric("dominance_violations", static_cast<double>(rep.dominance_violations));
    if (!args.no_gaussian) {
        metric("gaussian_mean", rep.gaussian.mean);
        metric("gaussian_ratio", rep.gaussian_ratio);
    }
    metric("fitted_c", rep.fitted_c);
    for (std::size_t i = 0; i < c_grid.size(); ++i) metric("bound_c=" + format_number(c_grid[i]), bounds[i]);
    r.csv = csv.str();
    return r;
}

// ---- verify ----

CommandResult run_verify(const VerifyArgs& args) {
    const Model m = load_model(args.model);
    mch_verify_report* raw = nullptr;
    check(mch_verify(m.chain.get(), m.funcs.get(), args.suite.c_str(), args.seed, &raw));
    const VerifyPtr report(raw);

    CsvTable csv({"suite", "check", "cases", "violations", "margin", "status", "note"});
    Json checks = Json::array();
    std::size_t violations = 0;
    for (std::size_t i = 0; i < mch_verify_report_size(report.get()); ++i) {
        mch_verify_entry e{};
        check(mch_verify_report_entry(report.get(), i, &e));
        const std::string status = e.skipped ? "skipped" : (e.violations == 0 ? "pass" : "FAIL");
        violations += e.violations;
        csv.add(e.suite).add(e.name).add(static_cast<std::uint64_t>(e.cases));
        csv.add(static_cast<std::uint64_t>(e.violations)).add(e.margin).add(status).add(e.note);
        csv.end_row();
        Json j;
        j["suite"] = e.suite;
        j["check"] = e.name;
        j["cases"] = e.cases;
        j["violations"] = e.violations;
        j["margin"] = e.margin;
        j["status"] = status;
        j["note"] = e.note;
        checks.push_back(j);
    }

    CommandResult r;
    const bool passed = mch_verify_report_passed(report.get()) != 0;
    r.data["suite"] = args.suite;
    r.data["passed"] = passed;
    r.data["violations"] = violations;
    r.data["checks"] = checks;
    r.csv = csv.str();
    r.exit_code = passed ? 0 : 1;
    return r;
}

}  // namespace mchcli
