// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mch {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonStochastic,
    NotStationary,
    DegenerateStationary,
    BoundViolation,
    NotMeanZero,
    OutOfRange,
    NegativeU,
    TooLarge,
    Unsorted,
    OddQ,
    LambdaGeOne,
    NotLattice,
    Overflow,
    InvalidOrder,
    NonConvergence,
    EmptyInput,
    Parse,
};

[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;

/// True for failures of the numerics themselves (as opposed to bad input).
[[nodiscard]] constexpr bool is_numeric_failure(ErrorCode code) noexcept {
    return code == ErrorCode::Overflow || code == ErrorCode::NonConvergence;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace mch
