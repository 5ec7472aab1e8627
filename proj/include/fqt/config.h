#pragma once

#include <optional>
#include <string>

#include "fqt/analysis.h"
#include "fqt/circuits.h"
#include "fqt/noise.h"
#include "fqt/rng.h"
#include "fqt/serialize.h"
#include "fqt/state_space.h"

namespace fqt {

/// Named states H, V, +x, -x, +y, -y, or explicit amplitudes.
struct InputSpec {
    std::optional<std::string> named;
    InputQubit amplitudes;

    InputQubit resolve() const;
    bool operator==(const InputSpec &) const = default;
};

InputQubit named_qubit(const std::string &name);

enum class OutputFormat { json, csv };

struct OutputSpec {
    std::optional<std::string> path;  // stdout when absent
    OutputFormat format = OutputFormat::json;
    bool operator==(const OutputSpec &) const = default;
};

struct QkdSpec {
    uint64_t n_bits = 10000;
    bool protected_transmission = true;
    bool operator==(const QkdSpec &) const = default;
};

/// Everything a command needs. Defaults: trials 1, pm_mode time_gated,
/// format json, identity noise, input H, seed 0.
struct ExperimentConfig {
    SchemeKind scheme = SchemeKind::two_channel;
    InputSpec input{std::string("H"), {}};
    NoiseSpec noise;
    PmMode pm_mode = PmMode::gated();
    uint64_t trials = 1;
    Seed seed;
    double fidelity_tolerance = kFidelityTolerance;
    OutputSpec output;
    std::optional<QkdSpec> qkd;
    std::optional<Circuit> circuit;

    /// Throws ConfigError on values no command can run with.
    void validate() const;
    /// Fills in the noise seed from the experiment seed for haar noise.
    ExperimentConfig resolved() const;

    bool operator==(const ExperimentConfig &) const = default;
};

ExperimentConfig config_from_json(const Json &j);
Json config_to_json(const ExperimentConfig &c);
/// Reads and parses a config file; ConfigError on unreadable or malformed input.
ExperimentConfig load_config(const std::string &path);

MonteCarloInput monte_carlo_input(const ExperimentConfig &c, unsigned threads = 1);
QkdInput qkd_input(const ExperimentConfig &c);

}  // namespace fqt
