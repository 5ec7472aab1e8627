#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "fqt/config.h"
#include "fqt/errors.h"

namespace fqt {
namespace {

Json parse(const char *text) {
    return Json::parse(text);
}

std::string error_of(const Json &j) {
    try {
        config_from_json(j);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

TEST(Config, Defaults) {
    auto c = config_from_json(parse("{}"));
    EXPECT_EQ(c.trials, 1u);
    EXPECT_TRUE(c.pm_mode.time_gated);
    EXPECT_EQ(c.output.format, OutputFormat::json);
    EXPECT_EQ(c.scheme, SchemeKind::two_channel);
    EXPECT_EQ(c.input.resolve(), named_qubit("H"));
    EXPECT_EQ(c.noise.kind, NoiseKind::identity);
}

TEST(Config, FullRoundTrip) {
    auto c = config_from_json(parse(R"({
        "scheme": "single_channel",
        "input": {"alpha": [0.6, 0.0], "beta": [0.0, 0.8]},
        "noise": {"kind": "column", "params": {"delta": [0.6, 0], "eta": 0.8}, "placement": "per_timebin",
                  "assignments": [{"timebin": 0, "kind": "rotation", "params": {"theta": 0.3}},
                                  {"channel": "ch", "timebin": 1, "kind": "identity"}]},
        "pm_mode": {"static": -1.5707963267948966},
        "trials": 17,
        "seed": 18446744073709551615,
        "fidelity_tolerance": 1e-6,
        "output": {"path": "out.csv", "format": "csv"},
        "qkd": {"n_bits": 500, "protected": false}
    })"));
    EXPECT_EQ(c.trials, 17u);
    EXPECT_EQ(c.seed.value, 18446744073709551615ull);
    EXPECT_FALSE(c.pm_mode.time_gated);
    ASSERT_TRUE(c.qkd);
    EXPECT_FALSE(c.qkd->protected_transmission);
    EXPECT_EQ(c.noise.overrides.size(), 2u);

    auto j = config_to_json(c);
    auto again = config_from_json(j);
    EXPECT_EQ(again, c);
    EXPECT_EQ(config_to_json(again).dump(), j.dump());
}

TEST(Config, NamedInputsAndHaarRoundTrip) {
    for (const char *name : {"H", "V", "+x", "-x", "+y", "-y"}) {
        ExperimentConfig c;
        c.input = InputSpec{std::string(name), {}};
        c.noise = NoiseSpec{NoiseKind::haar, {}, NoisePlacement::per_channel, Seed{4}, {}};
        EXPECT_EQ(config_from_json(config_to_json(c)), c) << name;
    }
}

TEST(Config, CustomCircuitRoundTrip) {
    auto c = config_from_json(parse(R"({
        "circuit": {"name": "split-merge", "inputs": ["in"], "outputs": ["out"],
                    "elements": [
                        {"kind": "PBS", "in1": "in", "transmit": "1", "reflect": "2"},
                        {"kind": "PM", "path": "2", "schedule": {"default_phase": 0.5, "per_bin": {"1": -0.5}}},
                        {"kind": "FS", "path": "1", "from": "omega2", "to": "omega1"},
                        {"kind": "FS", "path": "1", "from": "omega1", "to": "omega2"},
                        {"kind": "Delay", "path": "2", "bins": 1},
                        {"kind": "Delay", "path": "1", "bins": 1},
                        {"kind": "PBS", "in1": "1", "in2": "2", "transmit": "out", "reflect": "idle"}
                    ]}
    })"));
    ASSERT_TRUE(c.circuit);
    EXPECT_EQ(c.circuit->elements.size(), 7u);
    EXPECT_EQ(config_from_json(config_to_json(c)), c);

    auto builtin = config_from_json(parse(R"({"circuit": "single-channel-encoder"})"));
    EXPECT_EQ(*builtin.circuit, single_channel_encoder_circuit());
    EXPECT_EQ(config_from_json(config_to_json(builtin)), builtin);
}

TEST(Config, ElementsRoundTripByteIdentically) {
    for (const auto &name : builtin_circuit_names()) {
        auto c = builtin_circuit(name);
        for (const auto &e : c.elements) {
            auto j = element_to_json(e);
            EXPECT_EQ(element_to_json(element_from_json(j)).dump(), j.dump());
            EXPECT_EQ(element_from_json(j), e);
        }
    }
}

TEST(Config, UnknownFieldsRejectedWithPath) {
    EXPECT_NE(error_of(parse(R"({"trails": 3})")).find("trails"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"noise": {"kind": "rotation", "params": {"theta": 1, "phi": 2}}})"))
                  .find("noise.params.phi"),
              std::string::npos);
    EXPECT_NE(error_of(parse(R"({"output": {"format": "json", "colour": 1}})")).find("output.colour"),
              std::string::npos);
}

TEST(Config, InvalidValuesNameTheField) {
    EXPECT_NE(error_of(parse(R"({"trials": 0})")).find("trials"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"trials": -2})")).find("trials"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"scheme": "three"})")).find("scheme"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"input": "D"})")).find("input"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"input": {"alpha": 1, "beta": 1}})")).find("input"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"noise": {"kind": "column", "params": {"delta": 1, "eta": 1}}})")).find("noise"),
              std::string::npos);
    EXPECT_NE(error_of(parse(R"({"noise": {"kind": "rotation"}})")).find("noise.params.theta"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"pm_mode": "sometimes"})")).find("pm_mode"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"fidelity_tolerance": 2})")).find("fidelity_tolerance"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"output": {"format": "xml"}})")).find("output.format"), std::string::npos);
    EXPECT_NE(error_of(parse(R"({"circuit": {"name": "x", "inputs": ["in"], "outputs": ["o"],
                                 "elements": [{"kind": "HWP", "path": "nowhere"}]}})"))
                  .find("circuit"),
              std::string::npos);
    EXPECT_NE(error_of(parse(R"({"circuit": {"name": "x", "inputs": ["in"], "outputs": ["in"],
                                 "elements": [{"kind": "Laser", "path": "in"}]}})"))
                  .find("circuit.elements[0].kind"),
              std::string::npos);
    EXPECT_NE(error_of(parse("[]")).find("expected an object"), std::string::npos);
}

TEST(Config, HaarSeedFallsBackToExperimentSeed) {
    ExperimentConfig c;
    c.seed = Seed{77};
    c.noise.kind = NoiseKind::haar;
    EXPECT_EQ(c.resolved().noise.seed, Seed{77});
    c.noise.seed = Seed{5};
    EXPECT_EQ(c.resolved().noise.seed, Seed{5});
}

TEST(Config, LoadFromFile) {
    std::string path = ::testing::TempDir() + "fqt_config_test.json";
    {
        std::ofstream f(path);
        f << R"({"scheme": "single_channel", "trials": 3})";
    }
    auto c = load_config(path);
    EXPECT_EQ(c.scheme, SchemeKind::single_channel);
    EXPECT_EQ(c.trials, 3u);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    EXPECT_THROW(load_config(path), ConfigError);
    std::remove(path.c_str());
    EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Config, MonteCarloAndQkdInputs) {
    ExperimentConfig c;
    c.trials = 9;
    c.seed = Seed{3};
    c.qkd = QkdSpec{123, false};
    auto mc = monte_carlo_input(c, 4);
    EXPECT_EQ(mc.trials, 9u);
    EXPECT_EQ(mc.threads, 4u);
    auto q = qkd_input(c);
    EXPECT_EQ(q.n_bits, 123u);
    EXPECT_FALSE(q.protected_transmission);
    EXPECT_EQ(q.seed, Seed{3});
}

}  // namespace
}  // namespace fqt
