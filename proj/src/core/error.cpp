// SPDX-License-Identifier: Apache-2.0
#include "core/error.hpp"

namespace mch {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonStochastic: return "NonStochastic";
        case ErrorCode::NotStationary: return "NotStationary";
        case ErrorCode::DegenerateStationary: return "DegenerateStationary";
        case ErrorCode::BoundViolation: return "BoundViolation";
        case ErrorCode::NotMeanZero: return "NotMeanZero";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NegativeU: return "NegativeU";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::Unsorted: return "Unsorted";
        case ErrorCode::OddQ: return "OddQ";
        case ErrorCode::LambdaGeOne: return "LambdaGeOne";
        case ErrorCode::NotLattice: return "NotLattice";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

}  // namespace mch
