// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "core/chain.hpp"

namespace mch {

/// Parsed chain file:
///   {"transition": [[...]], "stationary": [...],
///    "functions": {"values": [[...]], "bounds": [...]}}
/// "stationary" and "functions" are optional; "bounds" defaults to max |f_i|.
struct ChainDocument {
    MarkovChain chain;
    std::optional<FunctionFamily> functions;
};

/// Throws Error(Parse) on malformed JSON or wrong field types, and the usual
/// validation errors for the chain and family (functions must be mean-zero).
ChainDocument parse_chain_json(std::string_view text, const Tolerances& tol = default_tolerances());

std::string chain_to_json(const MarkovChain& chain, const FunctionFamily* functions = nullptr);

}  // namespace mch
