// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/chain.hpp"
#include "core/tolerances.hpp"

namespace mch {

enum class VerifySuite { All, Chain, Spectral, Oracle, Appendix };

/// Throws InvalidArgument on an unknown name.
VerifySuite parse_verify_suite(std::string_view name);
[[nodiscard]] std::string_view verify_suite_name(VerifySuite suite) noexcept;

/// Outcome of one invariant over many cases. margin is the largest
/// lhs - rhs seen (negative when every case holds with room).
struct VerifyCheck {
    std::string suite;
    std::string name;
    std::size_t cases = 0;
    std::size_t violations = 0;
    double margin = 0.0;
    bool skipped = false;
    std::string note;

    [[nodiscard]] bool passed() const noexcept { return skipped || violations == 0; }
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] std::size_t violations() const noexcept;
};

/// Runs the selected invariant suites on one chain. funcs may be null, in
/// which case the oracle suite is reported as skipped.
VerifyReport run_verification(const MarkovChain& chain, const FunctionFamily* funcs,
                              VerifySuite suite, std::uint64_t seed,
                              const Tolerances& tol = default_tolerances());

}  // namespace mch
