#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>

namespace fqt {

using Amplitude = std::complex<double>;

/// Amplitudes with magnitude below this are dropped after every construction.
inline constexpr double kPruneThreshold = 1e-15;
/// Tolerance on |alpha|^2 + |beta|^2 = 1 and on freshly prepared norms.
inline constexpr double kNormTolerance = 1e-12;

enum class Polarization : uint8_t { H = 0, V = 1 };

/// Discrete frequency label. Index 1 is omega1, index 2 is omega2; further
/// indices are allowed for custom circuits.
struct Frequency {
    uint32_t index = 2;
    auto operator<=>(const Frequency &) const = default;
};

inline constexpr Frequency kOmega1{1};
inline constexpr Frequency kOmega2{2};

struct PathLabel {
    std::string name;

    PathLabel() = default;
    PathLabel(std::string n) : name(std::move(n)) {}
    PathLabel(const char *n) : name(n) {}
    auto operator<=>(const PathLabel &) const = default;
};

/// Arrival slot. Bin 0 is the undelayed arrival time t; bin k is t + k*dT.
struct TimeBin {
    uint32_t index = 0;
    auto operator<=>(const TimeBin &) const = default;
};

/// One basis vector of the single-photon space. Ordered by (path, timebin, freq, pol).
struct ModeKet {
    Polarization pol = Polarization::H;
    Frequency freq = kOmega2;
    PathLabel path;
    TimeBin bin;

    bool operator==(const ModeKet &) const = default;
    std::strong_ordering operator<=>(const ModeKet &other) const;
};

std::string to_string(Polarization p);
std::string to_string(Frequency f);
std::string to_string(const ModeKet &k);
Polarization parse_polarization(const std::string &text);
Frequency parse_frequency(const std::string &text);

/// Finite map from ModeKets to amplitudes. Immutable once built; iteration
/// follows the ModeKet order. May be sub-normalized after conditioning.
class PhotonState {
   public:
    using Map = std::map<ModeKet, Amplitude>;

    PhotonState() = default;
    /// Duplicate kets are summed, then tiny amplitudes are pruned.
    PhotonState(std::initializer_list<std::pair<ModeKet, Amplitude>> terms);
    explicit PhotonState(Map amplitudes);

    const Map &amplitudes() const { return amplitudes_; }
    Map::const_iterator begin() const { return amplitudes_.begin(); }
    Map::const_iterator end() const { return amplitudes_.end(); }
    size_t size() const { return amplitudes_.size(); }
    bool empty() const { return amplitudes_.empty(); }

    Amplitude amplitude(const ModeKet &k) const;
    double norm_squared() const;

    PhotonState scaled(Amplitude factor) const;
    /// Throws ValidationError on a zero-norm state.
    PhotonState normalized() const;

    bool operator==(const PhotonState &) const = default;

   private:
    Map amplitudes_;
};

/// Accumulates amplitudes (adding on collision) and produces a pruned state.
class StateBuilder {
   public:
    /// Returns true if the ket already held an amplitude.
    bool add(const ModeKet &k, Amplitude a);
    PhotonState build() &&;

   private:
    PhotonState::Map acc_;
};

struct InputQubit {
    Amplitude alpha{1.0, 0.0};
    Amplitude beta{0.0, 0.0};

    bool operator==(const InputQubit &) const = default;
};

/// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 within kNormTolerance.
void validate(const InputQubit &q);

/// alpha|H, freq, path, bin0> + beta|V, freq, path, bin0>.
PhotonState prepare_input(const InputQubit &q, Frequency freq, const PathLabel &path);

/// <s1|s2>, conjugate-linear in s1.
Amplitude inner_product(const PhotonState &s1, const PhotonState &s2);

/// |<ideal|s>|^2 / (|ideal|^2 |s|^2). Throws ValidationError if either is zero.
double fidelity(const PhotonState &s, const PhotonState &ideal);

struct Conditioned {
    PhotonState sub;  // unnormalized
    double probability = 0.0;
    bool empty_branch = true;
};

/// Post-selection onto the kets satisfying `keep`.
Conditioned condition(const PhotonState &s, const std::function<bool(const ModeKet &)> &keep);

/// Moves every ket onto (path, bin), summing collisions. Used to compare branch
/// contents that live on different ports or arrival slots.
PhotonState relocate(const PhotonState &s, const PathLabel &path, TimeBin bin);

/// max |a_k - b_k| over the union of supports.
double max_amplitude_deviation(const PhotonState &a, const PhotonState &b);

}  // namespace fqt
