// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Invocation {
    int exit_code = -1;
    std::string out;
};

Invocation run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + MCH_CLI_PATH + " " + args + " 2>/dev/null";
    Invocation r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const char* name) { return std::string(MCH_TEST_DATA_DIR) + "/" + name; }

std::string without_duration(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("duration_seconds") == std::string::npos) out += line + "\n";
    }
    return out;
}

TEST(Cli, BoundsCsvColumns) {
    const Invocation r = run("bounds --u-grid 0:8:0.5 --lambda 0.5");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("\nu,iid,healy,rao,fjs,vacuous_flags\n"), std::string::npos);
    EXPECT_NE(r.out.find("# subcommand: bounds"), std::string::npos);
    std::size_t rows = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) rows += (!line.empty() && line[0] != '#' && line[0] != 'u') ? 1 : 0;
    EXPECT_EQ(rows, 17u);
}

TEST(Cli, GridEndpointWithinHalfStep) {
    const Invocation r = run("bounds --u-grid 0:1:0.3 --lambda 0.1 --format json");
    ASSERT_EQ(r.exit_code, 0);
    // 0, 0.3, 0.6, 0.9 (1.2 is more than half a step past the end).
    EXPECT_NE(r.out.find("\"u\": 0.8999999999999999"), std::string::npos);
    EXPECT_EQ(r.out.find("\"u\": 1.2"), std::string::npos);
}

TEST(Cli, ExactMomentTableJson) {
    const Invocation r = run("exact --chain " + data("three_state.json") + " --q 8");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("\"manifest\""), std::string::npos);
    EXPECT_NE(r.out.find("\"moments\""), std::string::npos);
    EXPECT_NE(r.out.find("\"m\": 8"), std::string::npos);
}

TEST(Cli, ExactTailCsv) {
    const Invocation r = run("exact --lambda 0 -n 2 --u-grid 1.4142135623730951");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("u,threshold,tail,rao,fjs"), std::string::npos);
    EXPECT_NE(r.out.find(",0.5,"), std::string::npos);
}

TEST(Cli, VerifyPassesAndFails) {
    EXPECT_EQ(run("verify --chain " + data("three_state.json") + " --suite all").exit_code, 0);
    // The swap chain has lambda = 1; lambda-dependent checks are skipped, not failed.
    EXPECT_EQ(run("verify --chain " + data("swap.json") + " --suite all").exit_code, 0);
}

TEST(Cli, ValidationErrorsExitOne) {
    EXPECT_EQ(run("bounds --lambda 0.5 --u-grid 1:0:1").exit_code, 1);
    EXPECT_EQ(run("bounds --u-grid 0:1:0.5").exit_code, 1);
    EXPECT_EQ(run("exact --lambda 1.5").exit_code, 1);
    EXPECT_EQ(run("simulate --chain /does/not/exist.json").exit_code, 1);
    EXPECT_EQ(run("frobnicate").exit_code, 1);
    EXPECT_EQ(run("").exit_code, 1);
}

TEST(Cli, NumericFailureExitsTwo) {
    EXPECT_EQ(run("exact --lambda 0.5 -n 10 --theta-grid 200").exit_code, 2);
}

TEST(Cli, AtomicFileOutput) {
    const auto dir = std::filesystem::temp_directory_path() / "mch_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "bounds.json";
    std::filesystem::remove(path);
    ASSERT_EQ(run("bounds --lambda 0.3 --u-grid 1,2 --format json --output " + path.string()).exit_code, 0);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_NE(text.str().find("\"rows\""), std::string::npos);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST(Cli, OutputFormatAlias) {
    const Invocation r = run("spectral --lambda 0.5 --powers 2 --output csv");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("k,deviation_norm,lambda_power"), std::string::npos);
}

TEST(Cli, SimulateIsDeterministicAcrossThreads) {
    const std::string args = "simulate --lambda 0.5 -n 12 --trials 3000 --seed 7 --u-grid 0.5:2:0.5 --exact";
    const Invocation a = run(args, "MC_HOEFFDING_THREADS=1");
    const Invocation b = run(args, "MC_HOEFFDING_THREADS=4");
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_EQ(without_duration(a.out), without_duration(b.out));
}

TEST(Cli, MatrixReport) {
    const Invocation r = run("matrix --d 6 --lambda 0.5 --trials 20 --seed 3 --c-grid 1,2");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("\"fitted_c\""), std::string::npos);
    EXPECT_NE(r.out.find("\"dominance_violations\": 0"), std::string::npos);
}

TEST(Cli, VersionFlag) {
    const Invocation r = run("--version");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_FALSE(r.out.empty());
}

}  // namespace
