// Drives the memspike executable and checks stdout and exit codes.

#include <gtest/gtest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef MEMSPIKE_CLI
#error "MEMSPIKE_CLI must point at the memspike executable"
#endif

namespace {

namespace fs = std::filesystem;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(MEMSPIKE_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("memspike_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, RunXorZeroOnePrintsOne) {
    const auto r = run("run --gate xor --bits 01");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1\n");
}

TEST_F(CliTest, RunOrZeroZeroPrintsZero) {
    const auto r = run("run --gate or --bits 00");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0\n");
}

TEST_F(CliTest, RunNot) {
    EXPECT_EQ(run("run --gate not --bits 1").out, "0\n");
    EXPECT_EQ(run("run --gate not --bits 0").out, "1\n");
    EXPECT_EQ(run("run --gate not --bits 01").code, 2);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
    EXPECT_EQ(run("run --gate nor --bits 01").code, 2);
    EXPECT_EQ(run("run --gate or --bits 0").code, 2);
    EXPECT_EQ(run("run --gate or --bits 02").code, 2);
    EXPECT_EQ(run("run --gate or").code, 2);
    EXPECT_EQ(run("truth-table --gate or --repeat 0").code, 2);
    EXPECT_EQ(run("experiment bogus").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, RunJsonAndTrace) {
    const auto trace = dir_ / "run.csv";
    const auto r = run("--no-noise --json --trace " + trace.string() + " run --gate or --bits 01");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["output"], 1);
    EXPECT_NEAR(j["i_read_A"].get<double>(), 58.7e-9, 0.02 * 58.7e-9);
    const std::string csv = slurp(trace);
    EXPECT_EQ(csv.rfind("step,t_s,v_V,i_A,annotation\n", 0), 0u);
    EXPECT_NE(csv.find(",read\n"), std::string::npos);
}

TEST_F(CliTest, TruthTableXorSevenRepeats) {
    const auto r = run("--json truth-table --gate xor --repeat 7");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["rows"].size(), 28u);
    EXPECT_EQ(j["correct"], 28);
    EXPECT_TRUE(j["passed"].get<bool>());
}

TEST_F(CliTest, TruthTableOrMatchesOracleValues) {
    const auto r = run("--no-noise --json truth-table --gate or");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const double expected[] = {1.11e-9, 58.7e-9, -22.3e-9, 22.3e-9};
    ASSERT_EQ(j["rows"].size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(j["rows"][k]["i_read_A"].get<double>(), expected[k],
                    0.02 * std::abs(expected[k]));
    }
}

TEST_F(CliTest, TruthTableFailureExitsOne) {
    // 30 nA rejects OR(1,0) and OR(1,1).
    const auto r = run("--no-noise truth-table --gate or --threshold 3e-8");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, Calibrate) {
    const auto r = run("--json calibrate --gate or");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["threshold_A"].get<double>(), 1.17e-8, 0.01e-8);

    const auto cfg = dir_ / "same.ini";
    std::ofstream(cfg) << "[or]\none_V = 0.01\nzero_V = 0.2\n";
    // Swapped levels make the classes overlap; a missing level is a config error.
    EXPECT_EQ(run("--config " + cfg.string() + " calibrate --gate or").code, 1);
    const auto bad = dir_ / "bad.ini";
    std::ofstream(bad) << "[or]\none_V = 0.01\n";
    EXPECT_EQ(run("--config " + bad.string() + " calibrate --gate or").code, 2);
}

TEST_F(CliTest, ConfigAndFlagPrecedence) {
    const auto cfg = dir_ / "p.ini";
    std::ofstream(cfg) << "[run]\nnoise = off\n[xor]\nthreshold = 5e-8\n";
    // Config threshold 50 nA turns XOR(0,1) (42.6 nA) into a 0 ...
    EXPECT_EQ(run("--config " + cfg.string() + " run --gate xor --bits 01").out, "0\n");
    // ... and the flag wins over the config.
    EXPECT_EQ(
        run("--config " + cfg.string() + " run --gate xor --bits 01 --threshold 1.25e-8").out,
        "1\n");
}

TEST_F(CliTest, SeedMakesOutputDeterministic) {
    const auto a = run("--seed 9 --json truth-table --gate xor --repeat 2");
    const auto b = run("--seed 9 --json truth-table --gate xor --repeat 2");
    const auto c = run("--seed 10 --json truth-table --gate xor --repeat 2");
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, ExperimentsRun) {
    for (const char* name : {"square-wave", "noncommutative", "or-demo", "xor-demo"}) {
        const auto r = run(std::string("--no-noise experiment ") + name);
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
        EXPECT_NE(r.out.find(std::string("experiment=") + name), std::string::npos);
    }
    const auto repro = run("experiment xor-repro");
    EXPECT_EQ(repro.code, 0);
    EXPECT_NE(repro.out.find("correct=28"), std::string::npos);
}

TEST_F(CliTest, OrDemoThenPlot) {
    const auto trace = dir_ / "or.csv";
    const auto summary = dir_ / "or.txt";
    ASSERT_EQ(run("--trace " + trace.string() + " experiment or-demo --summary " +
                  summary.string())
                  .code,
              0);
    EXPECT_NE(slurp(summary).find("above_threshold=3"), std::string::npos);

    const auto svg1 = dir_ / "a.svg";
    const auto svg2 = dir_ / "b.svg";
    ASSERT_EQ(run("plot " + trace.string() + " --threshold 1.8e-8 --out " + svg1.string()).code, 0);
    ASSERT_EQ(run("plot " + trace.string() + " --threshold 1.8e-8 --out " + svg2.string()).code, 0);
    const std::string svg = slurp(svg1);
    EXPECT_EQ(svg, slurp(svg2));
    EXPECT_NE(svg.find("<svg"), std::string::npos);

    const auto ascii = run("plot " + trace.string() + " --ascii --width 40");
    EXPECT_EQ(ascii.code, 0);
    EXPECT_FALSE(ascii.out.empty());
}

TEST_F(CliTest, PlotEmptyOrMissingTraceExitsOne) {
    const auto empty = dir_ / "empty.csv";
    std::ofstream(empty) << "";
    EXPECT_EQ(run("plot " + empty.string()).code, 1);
    const auto header_only = dir_ / "header.csv";
    std::ofstream(header_only) << "step,t_s,v_V,i_A,annotation\n";
    EXPECT_EQ(run("plot " + header_only.string()).code, 1);
    EXPECT_EQ(run("plot " + (dir_ / "missing.csv").string()).code, 1);
}
