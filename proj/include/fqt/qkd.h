#pragma once

#include <array>
#include <string>

#include "fqt/circuits.h"
#include "fqt/noise.h"
#include "fqt/rng.h"
#include "fqt/state_space.h"

namespace fqt {

/// BB84 bases. X: |+-x> = (|H> +- |V>)/sqrt2. Y: |+-y> = (|H> +- i|V>)/sqrt2.
enum class Basis { X, Y };

std::string to_string(Basis b);

/// Bit 0 is the "+" state, bit 1 the "-" state.
InputQubit basis_state(Basis b, int bit);

/// Probabilities of reading bit 0 / bit 1. Requires a normalized state whose
/// kets share one (path, bin, frequency); throws ValidationError otherwise.
/// Probabilities below 1e-12 are snapped to zero.
std::array<double, 2> measurement_probabilities(const PhotonState &s, Basis b);

/// Projective measurement sampled with `rng`.
int measure(const PhotonState &s, Basis b, Rng &rng);

struct BasisTally {
    uint64_t sifted = 0;
    uint64_t errors = 0;
    double error_rate() const { return sifted == 0 ? 0.0 : static_cast<double>(errors) / sifted; }
};

struct QkdReport {
    uint64_t raw_bits = 0;
    uint64_t sifted_bits = 0;
    uint64_t errors = 0;
    double qber = 0.0;
    bool protected_transmission = false;
    SchemeKind scheme = SchemeKind::two_channel;
    std::string noise;
    Seed seed;
    BasisTally x;
    BasisTally y;
    /// Smallest fidelity of a realized branch against the prepared state
    /// (protected runs only; 1 when unprotected).
    double min_branch_fidelity = 1.0;

    double sifted_fraction() const { return raw_bits == 0 ? 0.0 : static_cast<double>(sifted_bits) / raw_bits; }
};

struct QkdInput {
    uint64_t n_bits = 1;
    NoiseSpec noise;
    bool protected_transmission = true;
    SchemeKind scheme = SchemeKind::two_channel;
    PmMode pm_mode;
    Seed seed;
};

/// Per bit: the sender draws basis and bit, the state crosses the channel
/// (through encoder/decoder when protected, bare otherwise), the receiver
/// draws a basis and measures; bits are kept when bases agree. Bit i uses its
/// own random stream and noise trial i.
QkdReport bb84_run(const QkdInput &in);

}  // namespace fqt
