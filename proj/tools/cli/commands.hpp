// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/output.hpp"

namespace mchcli {

/// Failure carrying the process exit code (1 validation, 2 numeric).
class CliError : public std::runtime_error {
public:
    CliError(int exit_code, const std::string& message) : std::runtime_error(message), exit_code_(exit_code) {}
    [[nodiscard]] int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// "start:stop:step" (endpoints inclusive within half a step), "a,b,c", or "a".
std::vector<double> parse_grid(const std::string& text);

/// Where the chain comes from: a JSON file, or the two-state chain at
/// lambda with the +-1 family over `steps` steps.
struct ModelArgs {
    std::string chain_path;
    std::optional<double> lambda;
    std::size_t steps = 16;

    [[nodiscard]] std::string describe() const;
};

struct SpectralArgs {
    ModelArgs model;
    std::size_t powers = 20;
};

struct BoundsArgs {
    std::string u_grid = "0:8:0.5";
    std::optional<double> lambda;
    std::string chain_path;
    double dimension = 1.0;
    double glss_c = 1.0;
};

struct ExactArgs {
    ModelArgs model;
    int q = 8;
    std::string u_grid;
    std::string theta_grid;
};

struct SimulateArgs {
    ModelArgs model;
    std::string u_grid = "0.5:4:0.5";
    std::size_t trials = 10'000;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    bool exact = false;
};

struct MatrixArgs {
    std::size_t d = 32;
    double lambda = 0.0;
    std::string pattern = "all-ones";
    std::string b_path;
    std::string order = "row-major";
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string c_grid = "1";
    bool no_gaussian = false;
};

struct VerifyArgs {
    ModelArgs model;
    std::string suite = "all";
    std::uint64_t seed = 0;
};

struct CommandResult {
    Json data;
    std::string csv;
    int exit_code = 0;
};

CommandResult run_spectral(const SpectralArgs& args);
CommandResult run_bounds(const BoundsArgs& args);
CommandResult run_exact(const ExactArgs& args);
CommandResult run_simulate(const SimulateArgs& args);
CommandResult run_matrix(const MatrixArgs& args);
CommandResult run_verify(const VerifyArgs& args);

}  // namespace mchcli
