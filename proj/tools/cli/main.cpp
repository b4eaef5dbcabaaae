// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <CLI11.hpp>
#include <mchoeffding/mchoeffding.h>

#include "cli/commands.hpp"
#include "cli/output.hpp"

namespace {

using namespace mchcli;

struct Common {
    std::string output;
    std::string format;
};

std::size_t threads_from_env() {
    const char* raw = std::getenv("MC_HOEFFDING_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    char* end = nullptr;
    const unsigned long n = std::strtoul(raw, &end, 10);
    if (*end != '\0' || n == 0 || n > 1024) {
        std::fprintf(stderr, "warning: ignoring MC_HOEFFDING_THREADS=%s\n", raw);
        return 1;
    }
    return n;
}

void add_common(CLI::App* sub, Common& common) {
    sub->add_option("--output,-o", common.output, "Output path (default stdout); 'csv' or 'json' select a format");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_model(CLI::App* sub, ModelArgs& model) {
    sub->add_option("--chain", model.chain_path, "Chain JSON file")->check(CLI::ExistingFile);
    sub->add_option("--lambda", model.lambda, "Use the two-state chain with this lambda and f = (1, -1)");
    sub->add_option("--steps,-n", model.steps, "Steps for the two-state family")->capture_default_str();
}

std::vector<std::pair<std::string, std::string>> recorded_flags(const CLI::App* sub) {
    std::vector<std::pair<std::string, std::string>> flags;
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string value;
        for (const auto& r : opt->results()) {
            if (!value.empty()) value += ' ';
            value += r;
        }
        flags.emplace_back(opt->get_name(), value);
    }
    return flags;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov-chain Hoeffding bounds: spectral analysis, exact oracles and simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mch_version()));

    Common common;
    const std::size_t threads = threads_from_env();

    struct Entry {
        CLI::App* app;
        Format default_format;
        std::function<CommandResult()> run;
        std::function<std::string()> input;
        std::function<std::uint64_t()> seed;
    };
    std::vector<Entry> entries;

    SpectralArgs spectral;
    auto* s = app.add_subcommand("spectral", "Contraction lambda and power-deviation norms of a chain");
    add_model(s, spectral.model);
    s->add_option("--powers", spectral.powers, "Largest power k reported")->capture_default_str();
    add_common(s, common);
    entries.push_back({s, Format::Json, [&] { return run_spectral(spectral); },
                       [&] { return spectral.model.describe(); }, [] { return std::uint64_t{0}; }});

    BoundsArgs bounds;
    auto* b = app.add_subcommand("bounds", "Closed-form tail bounds over a u-grid");
    b->add_option("--u-grid", bounds.u_grid, "start:stop:step or a,b,c")->capture_default_str();
    b->add_option("--lambda", bounds.lambda, "Contraction parameter");
    b->add_option("--chain", bounds.chain_path, "Take lambda from this chain JSON")->check(CLI::ExistingFile);
    b->add_option("--d", bounds.dimension, "Dimension for the matrix-valued bound")->capture_default_str();
    b->add_option("--glss-c", bounds.glss_c, "Constant for the matrix-valued bound")->capture_default_str();
    add_common(b, common);
    entries.push_back({b, Format::Csv, [&] { return run_bounds(bounds); },
                       [&] { return bounds.chain_path; }, [] { return std::uint64_t{0}; }});

    ExactArgs exact;
    auto* e = app.add_subcommand("exact", "Exact moments, tails and MGF by dynamic programming");
    add_model(e, exact.model);
    e->add_option("--q", exact.q, "Highest moment")->capture_default_str();
    e->add_option("--u-grid", exact.u_grid, "Also tabulate Pr[|S| >= u ||a||_2]");
    e->add_option("--theta-grid", exact.theta_grid, "Also tabulate E exp(theta S)");
    add_common(e, common);
    entries.push_back({e, Format::Json, [&] { return run_exact(exact); },
                       [&] { return exact.model.describe(); }, [] { return std::uint64_t{0}; }});

    SimulateArgs sim;
    sim.threads = threads;
    auto* m = app.add_subcommand("simulate", "Monte Carlo tail estimates with Wilson intervals");
    add_model(m, sim.model);
    m->add_option("--u-grid", sim.u_grid, "start:stop:step or a,b,c")->capture_default_str();
    m->add_option("--trials", sim.trials, "Sampled paths")->capture_default_str();
    m->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    m->add_flag("--exact", sim.exact, "Add the exact tail column");
    add_common(m, common);
    entries.push_back({m, Format::Csv, [&] { return run_simulate(sim); }, [&] { return sim.model.describe(); },
                       [&] { return sim.seed; }});

    MatrixArgs mat;
    mat.threads = threads;
    auto* x = app.add_subcommand("matrix", "Spectral norm of random symmetric matrices filled along a chain");
    x->add_option("--d", mat.d, "Dimension")->capture_default_str();
    x->add_option("--lambda", mat.lambda, "Two-state chain driving the signs")->capture_default_str();
    x->add_option("--pattern", mat.pattern, "Coefficient pattern")
        ->check(CLI::IsMember({"all-ones", "random-uniform"}))
        ->capture_default_str();
    x->add_option("--b", mat.b_path, "Coefficient matrix JSON (array of rows)")->check(CLI::ExistingFile);
    x->add_option("--order", mat.order, "Fill order")
        ->check(CLI::IsMember({"row-major", "diagonal-first"}))
        ->capture_default_str();
    x->add_option("--trials", mat.trials, "Sampled matrices")->capture_default_str();
    x->add_option("--seed", mat.seed, "Master seed")->capture_default_str();
    x->add_option("--c-grid", mat.c_grid, "Constants C for the bound column")->capture_default_str();
    x->add_flag("--no-gaussian", mat.no_gaussian, "Skip the Gaussian baseline");
    add_common(x, common);
    entries.push_back({x, Format::Json, [&] { return run_matrix(mat); },
                       [&] { return mat.b_path.empty() ? mat.pattern : mat.b_path; }, [&] { return mat.seed; }});

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Run invariant suites; exit 1 on any violation");
    add_model(v, verify.model);
    v->add_option("--suite", verify.suite, "Suite to run")
        ->check(CLI::IsMember({"all", "chain", "spectral", "oracle", "appendix"}))
        ->capture_default_str();
    v->add_option("--seed", verify.seed, "Seed for randomized checks")->capture_default_str();
    add_common(v, common);
    entries.push_back({v, Format::Json, [&] { return run_verify(verify); },
                       [&] { return verify.model.describe(); }, [&] { return verify.seed; }});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    for (const Entry& entry : entries) {
        if (!entry.app->parsed()) continue;

        std::string path = common.output;
        Format format = entry.default_format;
        if (entry.app == e && !exact.u_grid.empty()) format = Format::Csv;
        if (path == "csv" || path == "json") {
            common.format = path;
            path.clear();
        }
        if (!common.format.empty()) format = common.format == "csv" ? Format::Csv : Format::Json;

        RunManifest manifest;
        manifest.subcommand = entry.app->get_name();
        manifest.flags = recorded_flags(entry.app);
        manifest.version = mch_version();
        try {
            manifest.input = entry.input();
            manifest.seed = entry.seed();
            const auto start = std::chrono::steady_clock::now();
            CommandResult result = entry.run();
            manifest.duration_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

            std::string content;
            if (format == Format::Json) {
                Json doc;
                doc["manifest"] = manifest.to_json();
                doc["data"] = std::move(result.data);
                content = dump_json(doc);
            } else {
                content = manifest.to_csv_header() + result.csv;
            }
            write_output(path, content);
            if (result.exit_code != 0) {
                std::fprintf(stderr, "%s: invariant violations detected\n", manifest.subcommand.c_str());
            }
            return result.exit_code;
        } catch (const CliError& err) {
            std::fprintf(stderr, "error: %s\n", err.what());
            return err.exit_code();
        } catch (const std::exception& err) {
            std::fprintf(stderr, "error: %s\n", err.what());
            return 1;
        }
    }
    return 1;
}
