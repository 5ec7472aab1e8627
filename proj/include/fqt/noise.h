#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fqt/rng.h"
#include "fqt/state_space.h"

namespace fqt {

/// 2x2 unitary on (|H>, |V>). Column 0 is the image of |H>, column 1 of |V>.
class PolarizationUnitary {
   public:
    using Matrix = std::array<std::array<Amplitude, 2>, 2>;  // [row][col]

    PolarizationUnitary();  // identity
    /// Throws ValidationError if U^dagger U != I within 1e-12.
    explicit PolarizationUnitary(const Matrix &u);

    static PolarizationUnitary identity() { return {}; }
    /// Real rotation: H -> cos(theta) H + sin(theta) V.
    static PolarizationUnitary rotation(double theta);

    const Matrix &matrix() const { return u_; }
    Amplitude at(size_t row, size_t col) const { return u_[row][col]; }
    /// max |U^dagger U - I| entrywise.
    double unitarity_defect() const;

    bool operator==(const PolarizationUnitary &) const = default;

   private:
    Matrix u_;
};

double unitarity_defect(const PolarizationUnitary::Matrix &u);

/// First column (delta, eta); second column completed as (-conj(eta), conj(delta)),
/// so det U = 1. Throws ValidationError if |delta|^2 + |eta|^2 != 1 within 1e-12.
PolarizationUnitary complete_from_column(Amplitude delta, Amplitude eta);

/// Haar-random SU(2) element, a pure function of (seed, index). Two complex
/// Gaussians (a, b) are normalized and arranged as columns ((a, b), (-b*, a*)).
PolarizationUnitary sample_haar_su2(Seed seed, uint64_t index);

enum class NoiseKind { identity, rotation, column, haar };
enum class NoisePlacement { per_channel, per_timebin, global };

std::string to_string(NoiseKind k);
std::string to_string(NoisePlacement p);
NoiseKind parse_noise_kind(const std::string &text);
NoisePlacement parse_noise_placement(const std::string &text);

/// Where a unitary applies. An absent field matches any channel / any bin.
struct NoiseSlot {
    std::optional<PathLabel> channel;
    std::optional<TimeBin> bin;
    auto operator<=>(const NoiseSlot &) const = default;
};

/// Resolved noise for one run: a table of unitaries keyed by slot.
struct NoiseModel {
    NoiseKind kind = NoiseKind::identity;
    NoisePlacement placement = NoisePlacement::global;
    std::map<NoiseSlot, PolarizationUnitary> assignments;

    static NoiseModel identity();
    static NoiseModel uniform(const PolarizationUnitary &u, NoiseKind kind = NoiseKind::column);

    /// Lookup order: (channel, bin), (channel, any), (any, bin), (any, any).
    /// Throws ConfigError when nothing matches.
    const PolarizationUnitary &resolve(const PathLabel &channel, TimeBin bin) const;
};

/// Replaces each ket on `channel` by the resolved unitary's action on its
/// polarization. Frequency, path and time-bin are untouched.
PhotonState apply_noise(const NoiseModel &m, const PhotonState &s, const PathLabel &channel);

/// A deterministic unitary named in a configuration.
struct FixedNoise {
    NoiseKind kind = NoiseKind::identity;  // identity, rotation or column
    double theta = 0.0;
    Amplitude delta{1.0, 0.0};
    Amplitude eta{0.0, 0.0};

    PolarizationUnitary unitary() const;
    bool operator==(const FixedNoise &) const = default;
};

struct NoiseOverride {
    NoiseSlot slot;
    FixedNoise noise;
    bool operator==(const NoiseOverride &) const = default;
};

/// Configuration-level noise recipe. `realize` turns it into a NoiseModel for
/// a given trial.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::identity;
    FixedNoise fixed;  // parameters for identity/rotation/column
    NoisePlacement placement = NoisePlacement::global;
    std::optional<Seed> seed;  // haar only; falls back to the experiment seed
    std::vector<NoiseOverride> overrides;

    /// `channels` and `bins` are the slots the scheme traverses. Haar draws for
    /// trial t use stream indices t * kHaarStride + slot.
    NoiseModel realize(uint64_t trial, Seed fallback_seed, const std::vector<PathLabel> &channels,
                       const std::vector<TimeBin> &bins) const;
    std::string describe() const;

    bool operator==(const NoiseSpec &) const = default;
};

inline constexpr uint64_t kHaarStride = 16;

}  // namespace fqt
