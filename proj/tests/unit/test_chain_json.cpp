// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "core/chain_json.hpp"
#include "core/error.hpp"

namespace {

using mch::ErrorCode;

ErrorCode parse_error(const char* text) {
    try {
        (void)mch::parse_chain_json(text);
    } catch (const mch::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed: " << text;
    return ErrorCode::InvalidArgument;
}

TEST(ChainJson, ParsesFullDocument) {
    const auto doc = mch::parse_chain_json(R"({
        "transition": [[0.75, 0.25], [0.25, 0.75]],
        "stationary": [0.5, 0.5],
        "functions": {"values": [[1, -1], [0.5, -0.5]], "bounds": [1, 2]}
    })");
    EXPECT_EQ(doc.chain.size(), 2u);
    ASSERT_TRUE(doc.functions.has_value());
    EXPECT_EQ(doc.functions->steps(), 2u);
    EXPECT_EQ(doc.functions->bounds()[1], 2.0);
}

TEST(ChainJson, FunctionsAndStationaryAreOptional) {
    const auto doc = mch::parse_chain_json(R"({"transition": [[0.7, 0.3], [0.2, 0.8]]})");
    EXPECT_FALSE(doc.functions.has_value());
    EXPECT_NEAR(doc.chain.stationary()[0], 0.4, 1e-12);
}

TEST(ChainJson, RoundTrip) {
    const auto doc = mch::parse_chain_json(R"({
        "transition": [[0.7, 0.3], [0.2, 0.8]],
        "functions": {"values": [[0.6, -0.4]]}
    })");
    const auto again = mch::parse_chain_json(mch::chain_to_json(doc.chain, &*doc.functions));
    EXPECT_EQ(again.chain.transition(), doc.chain.transition());
    EXPECT_EQ(again.functions->values(), doc.functions->values());
}

TEST(ChainJson, Errors) {
    EXPECT_EQ(parse_error("not json"), ErrorCode::Parse);
    EXPECT_EQ(parse_error("[1, 2]"), ErrorCode::Parse);
    EXPECT_EQ(parse_error(R"({"stationary": [1]})"), ErrorCode::Parse);
    EXPECT_EQ(parse_error(R"({"transition": [[1, 0], [0]]})"), ErrorCode::DimensionMismatch);
    EXPECT_EQ(parse_error(R"({"transition": [["a", 0], [0, 1]]})"), ErrorCode::Parse);
    EXPECT_EQ(parse_error(R"({"transition": [[0.5, 0.6], [0.2, 0.8]]})"), ErrorCode::NonStochastic);
    EXPECT_EQ(parse_error(R"({"transition": [[0.7, 0.3], [0.2, 0.8]], "functions": {"values": [[1, -1]]}})"),
              ErrorCode::NotMeanZero);
}

}  // namespace
