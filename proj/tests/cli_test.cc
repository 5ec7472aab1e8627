#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include "fqt/cli.h"
#include "fqt/serialize.h"

namespace fqt {
namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fqt");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string &name) {
    return ::testing::TempDir() + "fqt_cli_" + name;
}

std::string write_config(const std::string &name, const std::string &body) {
    auto path = temp_path(name);
    std::ofstream(path) << body;
    return path;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

TEST(Cli, TransmitPlusXIdentity) {
    auto cfg = write_config("plusx.json", R"({"input": "+x"})");
    auto r = run({"transmit", "--config", cfg});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_EQ(j["command"], "transmit");
    EXPECT_EQ(j["config"]["input"], "+x");
    const auto &branches = j["report"]["branches"];
    ASSERT_FALSE(branches.empty());
    for (const auto &b : branches) {
        EXPECT_NEAR(b["fidelity"].get<double>(), 1.0, 1e-12);
    }
    EXPECT_NEAR(j["report"]["success_probability"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, TransmitSingleChannelColumnNoiseGated) {
    auto cfg = write_config("single.json", R"({"scheme": "single_channel", "input": {"alpha": 0.6, "beta": [0, 0.8]},
        "noise": {"kind": "column", "params": {"delta": 0.6, "eta": 0.8}}})");
    auto r = run({"transmit", "--config", cfg});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = Json::parse(r.out);
    ASSERT_EQ(j["report"]["branches"].size(), 4u);
    for (const auto &b : j["report"]["branches"]) {
        EXPECT_NEAR(b["fidelity"].get<double>(), 1.0, 1e-12);
    }
}

TEST(Cli, TransmitStaticPhaseFlagsTwoDegradedBranches) {
    auto cfg = write_config("static.json", R"({"scheme": "single_channel", "input": {"alpha": 0.8944271909999159,
        "beta": 0.4472135954999579}, "noise": {"kind": "column", "params": {"delta": 0.6, "eta": 0.8}},
        "pm_mode": {"static": 1.5707963267948966}})");
    auto r = run({"transmit", "--config", cfg});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = Json::parse(r.out);
    std::string notes = j["report"]["notes"].dump();
    EXPECT_NE(notes.find("2 degraded"), std::string::npos) << notes;
    EXPECT_NE(notes.find("static decoder phase"), std::string::npos) << notes;
    EXPECT_NEAR(j["report"]["success_probability"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, TransmitCsv) {
    auto r = run({"transmit", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.rfind("# command: transmit\n# config: ", 0), 0u);
    EXPECT_NE(r.out.find("\nport,timebin,probability,fidelity,success\n"), std::string::npos);
    EXPECT_NE(r.out.find("\nd_a,0,0.5,1,1\n"), std::string::npos) << r.out;
}

TEST(Cli, TransmitCustomCircuit) {
    auto cfg = write_config("circuit.json", R"({"input": "+y", "circuit": "two-channel-encoder"})");
    auto r = run({"transmit", "--config", cfg});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(Json::parse(r.out)["report"]["branches"].size(), 2u);
}

TEST(Cli, MonteCarloHaar) {
    auto cfg = write_config("mc.json", R"({"noise": {"kind": "haar", "placement": "per_channel"}, "trials": 500,
        "seed": 7})");
    auto r = run({"montecarlo", "--config", cfg, "--threads", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_GE(j["stats"]["min_fidelity"].get<double>(), 1.0 - 1e-10);
    EXPECT_EQ(j["config"]["noise"]["seed"], 7);
}

TEST(Cli, MonteCarloZeroTrialsIsValidationError) {
    auto r = run({"montecarlo", "--trials", "0"});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("trials"), std::string::npos);
}

TEST(Cli, BadConfigNamesField) {
    auto cfg = write_config("bad.json", R"({"noise": {"kind": "rotation", "params": {"angle": 1}}})");
    auto r = run({"transmit", "--config", cfg});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("noise.params"), std::string::npos) << r.err;

    r = run({"transmit", "--config", temp_path("does_not_exist.json")});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, kExitValidation);
    EXPECT_EQ(run({"teleport"}).code, kExitValidation);
    EXPECT_EQ(run({"transmit", "--format", "xml"}).code, kExitValidation);
    EXPECT_EQ(run({"qkd", "--protected", "--unprotected"}).code, kExitValidation);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, QkdUnprotectedRotation) {
    auto cfg = write_config("qkd.json", R"({"noise": {"kind": "rotation", "params": {"theta": 0.5235987755982988}},
        "qkd": {"n_bits": 10000, "protected": true}, "seed": 11})");
    auto r = run({"qkd", "--config", cfg, "--unprotected"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = Json::parse(r.out);
    EXPECT_NEAR(j["report"]["qber"].get<double>(), 0.125, 0.02);
    r = run({"qkd", "--config", cfg});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(Json::parse(r.out)["report"]["qber"].get<double>(), 0.0);
}

TEST(Cli, VerifyPassesAndNegativeControlFails) {
    auto ok = run({"verify"});
    EXPECT_EQ(ok.code, kExitOk) << ok.out;
    EXPECT_NE(ok.out.find("all checks passed"), std::string::npos);
    auto bad = run({"verify", "--corrupt-pm-sign"});
    EXPECT_EQ(bad.code, kExitVerification);
    EXPECT_NE(bad.out.find("channel_a_decoded"), std::string::npos);
}

TEST(Cli, VerifyWritesReport) {
    auto path = temp_path("verify.csv");
    auto r = run({"verify", "--output", path, "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk);
    auto text = slurp(path);
    EXPECT_EQ(text.rfind("check,max_deviation,threshold,status,note\n", 0), 0u);
    EXPECT_NE(text.find("channel_b_decoded"), std::string::npos);
    EXPECT_NE(text.find("static_pm_gap"), std::string::npos);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    auto cfg = write_config("det.json", R"({"scheme": "single_channel", "noise": {"kind": "haar",
        "placement": "per_timebin"}, "trials": 200, "seed": 99, "pm_mode": {"static": -1.5707963267948966},
        "qkd": {"n_bits": 2000}})");
    for (std::string cmd : {"transmit", "montecarlo", "qkd"}) {
        for (std::string fmt : {"json", "csv"}) {
            auto path = temp_path(cmd + "." + fmt);
            ASSERT_EQ(run({cmd, "--config", cfg, "--format", fmt, "--output", path}).code, kExitOk);
            auto first = slurp(path);
            ASSERT_EQ(run({cmd, "--config", cfg, "--format", fmt, "--output", path}).code, kExitOk);
            EXPECT_FALSE(first.empty());
            EXPECT_EQ(first, slurp(path)) << cmd << " " << fmt;
        }
    }
}

TEST(Cli, SeedFlagOverridesConfig) {
    auto cfg = write_config("seed.json", R"({"noise": {"kind": "haar", "placement": "per_channel"}, "seed": 1})");
    auto a = run({"transmit", "--config", cfg});
    auto b = run({"transmit", "--config", cfg, "--seed", "2"});
    ASSERT_EQ(a.code, kExitOk);
    ASSERT_EQ(b.code, kExitOk);
    EXPECT_EQ(Json::parse(b.out)["config"]["seed"], 2);
    EXPECT_NE(a.out, b.out);
}

#ifdef FQT_CLI_PATH
TEST(Cli, ExecutableExitCodes) {
    std::string exe = FQT_CLI_PATH;
    EXPECT_EQ(std::system((exe + " verify > /dev/null").c_str()), 0);
    int status = std::system((exe + " verify --corrupt-pm-sign > /dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(status), 2);
    status = std::system((exe + " montecarlo --trials 0 2> /dev/null").c_str());
    EXPECT_EQ(WEXITSTATUS(status), 1);
}
#endif

}  // namespace
}  // namespace fqt
